/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "mettagraph/atomspace.hpp"
#include "mettagraph/lts.hpp"
#include "mettagraph/pdts.hpp"
#include "mettagraph/pts.hpp"
#include "mettagraph/stlc.hpp"

namespace mtg::encode {

/// One lifted lambda: the combinator's extra parameters (enclosing binders
/// it captures) and the original lambda expression, for decoding.
template <typename TypeP, typename ExprP>
struct Combinator {
  std::vector<std::pair<std::string, TypeP>> params;
  ExprP lambda;
};

struct StlcEncoding {
  mlang::Atomspace space;
  std::map<std::string, Combinator<stlc::TypeP, stlc::ExprP>> table;
};

/// Lambda lifting into a pointed atomspace: one combinator per lambda, a
/// typing atom and an equation atom each, activation markers on every
/// application, the pointer at the main expression.
StlcEncoding encode_stlc(const stlc::Context& ctx, const stlc::ExprP& e);

/// Untyped variant: every type becomes the union of all small types.
StlcEncoding encode_untyped(const stlc::ExprP& e);

/// Inverts the combinator table; activation markers are transparent.
stlc::ExprP decode_stlc_term(const StlcEncoding& enc, const mlang::TermPtr& term);

/// Decodes the pointed result of a normal-form space and reduces residual
/// parameter redexes away.
stlc::ExprP decode_stlc_normal(const StlcEncoding& enc, const mlang::Atomspace& space,
                               std::size_t budget);

struct PtsEncoding {
  mlang::Atomspace space;
  std::map<std::string, Combinator<pts::ExprP, pts::ExprP>> table;
};

/// Sort typing atoms per axiom, transform-guarded rule atoms per product
/// rule, combinators per lambda, the pointer at the main expression.
PtsEncoding encode_pts(const pts::Spec& spec, const pts::Context& ctx, const pts::ExprP& e);

pts::ExprP decode_pts_term(const PtsEncoding& enc, const mlang::TermPtr& term);
pts::ExprP decode_pts_normal(const PtsEncoding& enc, const mlang::Atomspace& space,
                             std::size_t budget);

struct PdtsEncoding {
  mlang::Atomspace space;
  std::map<std::string, Combinator<pdts::TypeP, pdts::ExprP>> table;
};

/// The probabilistic prelude (distribution former, the two-branch choice
/// equations, the sample/thunk pair) plus the usual context and combinator
/// atoms.
PdtsEncoding encode_pdts(const pdts::Context& ctx, const pdts::ExprP& e);

pdts::ExprP decode_pdts_term(const PdtsEncoding& enc, const mlang::TermPtr& term);

mlang::TypeExpr map_stlc_type(const stlc::TypeP& t);
mlang::TypeExpr map_pdts_type(const pdts::TypeP& t);
mlang::TypeExpr map_pts_type(const pts::ExprP& t);

/// Observation probes shared by object-language and atomspace systems:
/// typing judgments and identity with named constants, each with its
/// opposite, realized as self-loop actions.
struct ProbeSet {
  std::vector<pdts::TypeP> types;
  std::vector<std::string> consts;
};

/// The reduction system of a probabilistic program: states are expressions,
/// update transitions carry weights when `weighted` is set, probe actions
/// are self-loops.
lts::Lts<pdts::ExprP> pdts_lts(const pdts::Context& ctx, const ProbeSet& probes, bool weighted);

/// The update system of an encoded space: states are quiescent spaces,
/// transitions are compressed update steps, probes consult the decoded
/// pointed expression under the same context.
lts::Lts<mlang::Atomspace> space_lts(const PdtsEncoding& enc, const pdts::Context& ctx,
                                     const ProbeSet& probes);

}  // namespace mtg::encode
