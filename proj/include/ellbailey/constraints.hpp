// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ellbailey/ellgamma.hpp"
#include "ellbailey/expr.hpp"
#include "json.hpp"

namespace ellbailey {

/// One validity inequality on the parameters: either |m| < 1 or |pq| < |m|.
///
/// `slack` in (0, 1) is the margin the sampler insists on: |m| <= slack for the
/// first kind and |pq| <= slack·|m| for the second. Checks of a given
/// assignment only require the strict inequality.
struct Constraint {
  enum class Kind { inside_unit_disk, above_pq };

  Kind kind = Kind::inside_unit_disk;
  ParamMonomial monomial;
  double slack = 0.95;

  static Constraint inside(ParamMonomial m, double slack = 0.95) {
    return {Kind::inside_unit_disk, std::move(m), slack};
  }
  static Constraint above_pq(ParamMonomial m, double slack = 0.7) { return {Kind::above_pq, std::move(m), slack}; }

  bool holds(const ParamValues& params, const BaseParams& base) const;
  bool holds_with_margin(const ParamValues& params, const BaseParams& base) const;
  std::string describe() const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Validity region of an identity or Bailey pair: the inequalities, the
/// parameters they range over and the external points on the unit circle.
struct ConstraintSet {
  std::vector<Constraint> records;
  std::vector<std::string> params;
  std::vector<std::string> points;

  /// Adds a record unless an identical one is present.
  void add(const Constraint& c);
  void add_param(const std::string& name);
  void add_point(const std::string& name);
  void merge(const ConstraintSet& other);

  bool satisfied(const Assignment& a, const BaseParams& base) const;
  /// Throws ConstraintViolation naming the first failing inequality, or a
  /// point off the unit circle.
  void check(const Assignment& a, const BaseParams& base) const;
};

nlohmann::json to_json(const Constraint& c);
Constraint constraint_from_json(const nlohmann::json& j);

}  // namespace ellbailey
