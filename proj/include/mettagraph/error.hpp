/*
 * Copyright 2026 the mettagraph authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArityError : Error {
  using Error::Error;
};
struct IndexError : Error {
  using Error::Error;
};
struct UnfoldBudgetError : Error {
  using Error::Error;
};
struct UnguardedFixError : Error {
  using Error::Error;
};
struct TypeShapeError : Error {
  using Error::Error;
};
struct BudgetError : Error {
  using Error::Error;
};

template <typename T>
struct Violation;

/// Thrown by validating constructors; carries the full report.
template <typename T>
struct ConstraintViolation : Error {
  ConstraintViolation(const std::string& msg, std::vector<Violation<T>> report)
      : Error(msg), report(std::move(report)) {}
  std::vector<Violation<T>> report;
};

}  // namespace mtg
