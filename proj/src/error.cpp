// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/error.hpp"

namespace ellbailey {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::non_convergent: return "NonConvergent";
    case ErrorCode::pole: return "PoleError";
    case ErrorCode::unknown_symbol: return "UnknownSymbol";
    case ErrorCode::degenerate: return "DegenerateError";
    case ErrorCode::not_converged: return "NotConverged";
    case ErrorCode::evaluation: return "EvaluationError";
    case ErrorCode::shape: return "ShapeError";
    case ErrorCode::constraint_violation: return "ConstraintViolation";
    case ErrorCode::sampling_exhausted: return "SamplingExhausted";
    case ErrorCode::parse: return "ParseError";
  }
  return "Error";
}

}  // namespace ellbailey
