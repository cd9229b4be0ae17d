/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mettagraph/error.hpp"

namespace mtg {

/// Index ∞: a target with no connection.
inline constexpr std::uint32_t kUnconnected = 0xFFFFFFFFu;

/// New connections introduced by one connect layer.  Keys address target
/// indices of the left operand (its own index space, >= 1); values address
/// edge/target indices of the right operand (0 = the operand itself).
/// Absent keys mean "unconnected".
using Wiring = std::map<std::uint32_t, std::uint32_t>;

enum class ViolationKind {
  TypeOrder,   // wired pair whose types are not related by the order
  SharedSink,  // two wiring entries feeding the same index
};

template <typename T>
struct Violation {
  ViolationKind kind = ViolationKind::TypeOrder;
  // For TypeOrder: the left-operand target index of the offending entry.
  // For SharedSink: the right-operand index fed twice.
  // Indices are relative to the connect layer where the violation was found.
  std::uint32_t target_index = 0;
  T source_type{};
  T sink_type{};
};

template <typename T>
using ConstraintReport = std::vector<Violation<T>>;

/// Immutable typed metagraph over type tags T and edge labels L.
///
/// Variants: the empty graph, a single edge with typed targets, the connect
/// composition of two graphs, and fix/ref pairs that finitely present
/// rational (cyclic) graphs.
template <typename T, typename L>
class Metagraph {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Empty {};
  struct Edge {
    T type;
    L label;
    std::vector<T> targets;
  };
  struct Connect {
    NodePtr left;
    NodePtr right;
    T type;
    L label;
    Wiring wiring;
  };
  struct Fix {
    std::uint32_t binder;
    NodePtr body;
  };
  struct FixRef {
    std::uint32_t binder;
  };

  struct Node {
    std::variant<Empty, Edge, Connect, Fix, FixRef> v;
  };

  using Order = std::function<bool(const T&, const T&)>;
  using LabelEq = std::function<bool(const L&, const L&)>;

  Metagraph() : node_(empty_node()) {}

  static Metagraph empty() { return Metagraph(empty_node()); }

  /// edge(n, t0, l0, targets); throws ArityError when targets.size() != n.
  static Metagraph edge(std::uint32_t arity, T type, L label, std::vector<T> targets) {
    if (targets.size() != arity) {
      throw ArityError("edge arity " + std::to_string(arity) + " does not match " +
                       std::to_string(targets.size()) + " target types");
    }
    return Metagraph(make(Edge{std::move(type), std::move(label), std::move(targets)}));
  }

  /// Raw connect, no constraint validation.  Used by tests that need to
  /// build violating graphs and by check-then-commit callers.
  static Metagraph connect_unchecked(const Metagraph& left, const Metagraph& right, T type,
                                     L label, Wiring wiring) {
    return Metagraph(
        make(Connect{left.node_, right.node_, std::move(type), std::move(label), std::move(wiring)}));
  }

  /// connect(a1, a2, t0, l0, q); validates wiring indices and the type
  /// constraint under `order`.  Throws ConstraintError carrying the report.
  static Metagraph connect(const Metagraph& left, const Metagraph& right, T type, L label,
                           Wiring wiring, const Order& order) {
    for (const auto& [from, to] : wiring) {
      if (from == 0) throw IndexError("wiring key 0 does not address a target");
      left.type_at(from);   // throws IndexError when dangling
      right.type_at(to);
    }
    Metagraph out = connect_unchecked(left, right, std::move(type), std::move(label), std::move(wiring));
    ConstraintReport<T> report = out.check_constraints(order);
    if (!report.empty()) {
      std::ostringstream msg;
      msg << "connect violates " << report.size() << " wiring constraint(s)";
      throw ConstraintViolation<T>(msg.str(), std::move(report));
    }
    return out;
  }

  /// Union is connect with an empty wiring: no new connections.
  static Metagraph union_of(const Metagraph& left, const Metagraph& right, T type, L label) {
    return connect_unchecked(left, right, std::move(type), std::move(label), Wiring{});
  }

  static Metagraph fix(std::uint32_t binder, const Metagraph& body) {
    return Metagraph(make(Fix{binder, body.node_}));
  }

  static Metagraph fixref(std::uint32_t binder) { return Metagraph(make(FixRef{binder})); }

  const Node& node() const { return *node_; }

  bool is_empty() const { return std::holds_alternative<Empty>(node_->v); }
  bool is_edge() const { return std::holds_alternative<Edge>(node_->v); }
  bool is_connect() const { return std::holds_alternative<Connect>(node_->v); }
  bool is_fix() const { return std::holds_alternative<Fix>(node_->v); }
  bool is_fixref() const { return std::holds_alternative<FixRef>(node_->v); }

  const Edge& as_edge() const { return std::get<Edge>(node_->v); }
  const Connect& as_connect() const { return std::get<Connect>(node_->v); }
  const Fix& as_fix() const { return std::get<Fix>(node_->v); }
  const FixRef& as_fixref() const { return std::get<FixRef>(node_->v); }

  Metagraph left() const { return Metagraph(as_connect().left); }
  Metagraph right() const { return Metagraph(as_connect().right); }
  Metagraph fix_body() const { return Metagraph(as_fix().body); }

  /// Type of the n'th edge or target.  Index 0 is the whole graph; for a
  /// connect, odd n addresses the left operand's position (n+1)/2 and even
  /// n the right operand's position n/2.  Fix nodes are unfolded on demand,
  /// up to `unfold_budget` layers.
  T type_at(std::uint32_t n, std::uint32_t unfold_budget = kDefaultUnfoldBudget) const {
    NodePtr cur = node_;
    std::uint32_t idx = n;
    while (true) {
      if (const auto* e = std::get_if<Edge>(&cur->v)) {
        if (idx == 0) return e->type;
        if (idx <= e->targets.size()) return e->targets[idx - 1];
        throw IndexError("type_at: index " + std::to_string(n) + " out of range");
      }
      if (const auto* c = std::get_if<Connect>(&cur->v)) {
        if (idx == 0) return c->type;
        if (idx % 2 == 1) {
          idx = (idx + 1) / 2;
          cur = c->left;
        } else {
          idx = idx / 2;
          cur = c->right;
        }
        continue;
      }
      if (std::get_if<Fix>(&cur->v)) {
        if (unfold_budget == 0) throw UnfoldBudgetError("type_at: unfold budget exceeded");
        --unfold_budget;
        cur = Metagraph(cur).unfold().node_;
        continue;
      }
      if (std::get_if<FixRef>(&cur->v)) throw IndexError("type_at: open fix reference");
      throw IndexError("type_at: index " + std::to_string(n) + " out of range (empty graph)");
    }
  }

  /// The index that target n feeds, or kUnconnected.  Consults the topmost
  /// connect layer's map first, then falls through under the interleaving.
  std::uint32_t connection(std::uint32_t n, std::uint32_t unfold_budget = kDefaultUnfoldBudget) const {
    if (const auto* e = std::get_if<Edge>(&node_->v)) {
      if (n >= 1 && n <= e->targets.size()) return kUnconnected;
      throw IndexError("connection: index " + std::to_string(n) + " out of range");
    }
    if (const auto* c = std::get_if<Connect>(&node_->v)) {
      auto it = c->wiring.find(n);
      if (it != c->wiring.end()) return it->second;
      if (n == 0) return kUnconnected;
      if (n % 2 == 1) return Metagraph(c->left).connection((n + 1) / 2, unfold_budget);
      return Metagraph(c->right).connection(n / 2, unfold_budget);
    }
    if (std::get_if<Fix>(&node_->v)) {
      if (unfold_budget == 0) throw UnfoldBudgetError("connection: unfold budget exceeded");
      return unfold().connection(n, unfold_budget - 1);
    }
    throw IndexError("connection: index " + std::to_string(n) + " out of range");
  }

  /// Checks every connect layer: each wired pair must satisfy
  /// order(f(left,n1), f(right,n2)), and no index may be fed twice from one
  /// layer.  Violations are data, not failures.
  ConstraintReport<T> check_constraints(const Order& order) const {
    ConstraintReport<T> report;
    check_rec(*node_, order, report);
    return report;
  }

  /// One-step unfolding: substitutes each outermost fix term for its bound
  /// references, one parallel layer.  Identity on edges; throws
  /// UnguardedFixError when a body is immediately its own reference.
  Metagraph unfold() const {
    if (const auto* f = std::get_if<Fix>(&node_->v)) {
      if (const auto* r = std::get_if<FixRef>(&f->body->v); r != nullptr && r->binder == f->binder) {
        throw UnguardedFixError("unfold: fix body is immediately its own reference");
      }
      return Metagraph(subst_ref(f->body, f->binder, node_));
    }
    if (const auto* c = std::get_if<Connect>(&node_->v)) {
      NodePtr l = Metagraph(c->left).unfold().node_;
      NodePtr r = Metagraph(c->right).unfold().node_;
      if (l == c->left && r == c->right) return *this;
      return Metagraph(make(Connect{std::move(l), std::move(r), c->type, c->label, c->wiring}));
    }
    if (std::get_if<FixRef>(&node_->v)) throw TypeShapeError("unfold: open fix reference");
    return *this;
  }

  /// Structure-, type-, and label-preserving equality.  `label_eq` lets the
  /// caller ignore parts of the label (edge-id components).  Fix binders are
  /// compared up to renaming.
  static bool iso(const Metagraph& a, const Metagraph& b, const LabelEq& label_eq) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> binders;
    return iso_rec(*a.node_, *b.node_, label_eq, binders);
  }

  static bool iso(const Metagraph& a, const Metagraph& b) {
    return iso(a, b, [](const L& x, const L& y) { return x == y; });
  }

  bool operator==(const Metagraph& other) const { return iso(*this, other); }

  /// Every valid index of a finite graph, in ascending order.  Fix terms are
  /// unfolded up to `unfold_budget`; indices beyond the budget are omitted.
  std::vector<std::uint32_t> valid_indices(std::uint32_t limit = 4096) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 0; n <= limit; ++n) {
      try {
        (void)type_at(n);
        out.push_back(n);
      } catch (const IndexError&) {
      } catch (const UnfoldBudgetError&) {
      }
    }
    return out;
  }

  /// Canonical s-expression form:
  ///   eps | (edge n t l (t1 ... tn)) | (connect g1 g2 t l ((i j) ...))
  ///   | (fix b g) | (ref b)
  std::string to_sexpr(const std::function<std::string(const T&)>& show_type,
                       const std::function<std::string(const L&)>& show_label) const {
    std::ostringstream os;
    print_rec(*node_, show_type, show_label, os);
    return os.str();
  }

 private:
  static constexpr std::uint32_t kDefaultUnfoldBudget = 64;

  explicit Metagraph(NodePtr node) : node_(std::move(node)) {}

  static NodePtr empty_node() {
    static const NodePtr instance = std::make_shared<const Node>(Node{Empty{}});
    return instance;
  }

  template <typename V>
  static NodePtr make(V&& v) {
    return std::make_shared<const Node>(Node{std::forward<V>(v)});
  }

  static NodePtr subst_ref(const NodePtr& body, std::uint32_t binder, const NodePtr& replacement) {
    if (const auto* r = std::get_if<FixRef>(&body->v)) {
      return r->binder == binder ? replacement : body;
    }
    if (const auto* c = std::get_if<Connect>(&body->v)) {
      NodePtr l = subst_ref(c->left, binder, replacement);
      NodePtr r = subst_ref(c->right, binder, replacement);
      if (l == c->left && r == c->right) return body;
      return make(Connect{std::move(l), std::move(r), c->type, c->label, c->wiring});
    }
    if (const auto* f = std::get_if<Fix>(&body->v)) {
      if (f->binder == binder) return body;  // shadowed
      NodePtr b = subst_ref(f->body, binder, replacement);
      if (b == f->body) return body;
      return make(Fix{f->binder, std::move(b)});
    }
    return body;
  }

  static void check_rec(const Node& node, const Order& order, ConstraintReport<T>& report) {
    if (const auto* c = std::get_if<Connect>(&node.v)) {
      Metagraph left{c->left};
      Metagraph right{c->right};
      std::map<std::uint32_t, std::uint32_t> sink_count;
      for (const auto& [from, to] : c->wiring) {
        T src;
        T snk;
        try {
          src = left.type_at(from);
          snk = right.type_at(to);
        } catch (const Error&) {
          report.push_back({ViolationKind::TypeOrder, from, T{}, T{}});
          continue;
        }
        if (!order(src, snk)) {
          report.push_back({ViolationKind::TypeOrder, from, src, snk});
        }
        if (++sink_count[to] == 2) {
          report.push_back({ViolationKind::SharedSink, to, src, snk});
        }
      }
      check_rec(*c->left, order, report);
      check_rec(*c->right, order, report);
    } else if (const auto* f = std::get_if<Fix>(&node.v)) {
      check_rec(*f->body, order, report);
    }
  }

  static bool iso_rec(const Node& a, const Node& b, const LabelEq& label_eq,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>>& binders) {
    if (a.v.index() != b.v.index()) return false;
    if (std::holds_alternative<Empty>(a.v)) return true;
    if (const auto* ea = std::get_if<Edge>(&a.v)) {
      const auto& eb = std::get<Edge>(b.v);
      return ea->type == eb.type && label_eq(ea->label, eb.label) && ea->targets == eb.targets;
    }
    if (const auto* ca = std::get_if<Connect>(&a.v)) {
      const auto& cb = std::get<Connect>(b.v);
      return ca->type == cb.type && label_eq(ca->label, cb.label) && ca->wiring == cb.wiring &&
             iso_rec(*ca->left, *cb.left, label_eq, binders) &&
             iso_rec(*ca->right, *cb.right, label_eq, binders);
    }
    if (const auto* fa = std::get_if<Fix>(&a.v)) {
      const auto& fb = std::get<Fix>(b.v);
      binders.emplace_back(fa->binder, fb.binder);
      bool ok = iso_rec(*fa->body, *fb.body, label_eq, binders);
      binders.pop_back();
      return ok;
    }
    const auto& ra = std::get<FixRef>(a.v);
    const auto& rb = std::get<FixRef>(b.v);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      if (it->first == ra.binder || it->second == rb.binder) {
        return it->first == ra.binder && it->second == rb.binder;
      }
    }
    return ra.binder == rb.binder;
  }

  static void print_rec(const Node& node, const std::function<std::string(const T&)>& st,
                        const std::function<std::string(const L&)>& sl, std::ostringstream& os) {
    if (std::holds_alternative<Empty>(node.v)) {
      os << "eps";
      return;
    }
    if (const auto* e = std::get_if<Edge>(&node.v)) {
      os << "(edge " << e->targets.size() << " " << st(e->type) << " " << sl(e->label) << " (";
      for (std::size_t i = 0; i < e->targets.size(); ++i) {
        if (i > 0) os << " ";
        os << st(e->targets[i]);
      }
      os << "))";
      return;
    }
    if (const auto* c = std::get_if<Connect>(&node.v)) {
      os << "(connect ";
      print_rec(*c->left, st, sl, os);
      os << " ";
      print_rec(*c->right, st, sl, os);
      os << " " << st(c->type) << " " << sl(c->label) << " (";
      bool first = true;
      for (const auto& [from, to] : c->wiring) {
        if (!first) os << " ";
        first = false;
        os << "(" << from << " " << to << ")";
      }
      os << "))";
      return;
    }
    if (const auto* f = std::get_if<Fix>(&node.v)) {
      os << "(fix " << f->binder << " ";
      print_rec(*f->body, st, sl, os);
      os << ")";
      return;
    }
    os << "(ref " << std::get<FixRef>(node.v).binder << ")";
  }

  NodePtr node_;
};

}  // namespace mtg
