// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "ellbailey/error.hpp"

namespace ellbailey {

bool Constraint::holds(const ParamValues& params, const BaseParams& base) const {
  const double m = std::abs(monomial.evaluate(params));
  if (kind == Kind::inside_unit_disk) return m < 1.0;
  return std::abs(base.p() * base.q()) < m;
}

bool Constraint::holds_with_margin(const ParamValues& params, const BaseParams& base) const {
  const double m = std::abs(monomial.evaluate(params));
  if (kind == Kind::inside_unit_disk) return m <= slack;
  return std::abs(base.p() * base.q()) <= slack * m;
}

std::string Constraint::describe() const {
  if (kind == Kind::inside_unit_disk) return "|" + monomial.to_string() + "| < 1";
  return "|pq| < |" + monomial.to_string() + "|";
}

void ConstraintSet::add(const Constraint& c) {
  if (std::find(records.begin(), records.end(), c) == records.end()) records.push_back(c);
}

void ConstraintSet::add_param(const std::string& name) {
  if (std::find(params.begin(), params.end(), name) == params.end()) params.push_back(name);
}

void ConstraintSet::add_point(const std::string& name) {
  if (std::find(points.begin(), points.end(), name) == points.end()) points.push_back(name);
}

void ConstraintSet::merge(const ConstraintSet& other) {
  for (const auto& c : other.records) add(c);
  for (const auto& p : other.params) add_param(p);
  for (const auto& p : other.points) add_point(p);
}

bool ConstraintSet::satisfied(const Assignment& a, const BaseParams& base) const {
  try {
    check(a, base);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::constraint_violation) return false;
    throw;
  }
}

void ConstraintSet::check(const Assignment& a, const BaseParams& base) const {
  for (const auto& c : records) {
    if (!c.holds(a.params, base)) {
      throw Error(ErrorCode::constraint_violation,
                  c.describe() + " fails: |value| = " + std::to_string(std::abs(c.monomial.evaluate(a.params))) +
                      ", |pq| = " + std::to_string(std::abs(base.p() * base.q())));
    }
  }
  for (const auto& name : points) {
    auto it = a.vars.find(name);
    if (it == a.vars.end()) throw Error(ErrorCode::unknown_symbol, "point '" + name + "' has no value");
    if (std::abs(std::abs(it->second) - 1.0) > 1e-12) {
      throw Error(ErrorCode::constraint_violation, "point '" + name + "' must lie on the unit circle");
    }
  }
}

nlohmann::json to_json(const Constraint& c) {
  return {{"kind", c.kind == Constraint::Kind::inside_unit_disk ? "lt_one" : "gt_pq"},
          {"monomial", to_json(c.monomial)},
          {"slack", c.slack}};
}

Constraint constraint_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "lt_one" && kind != "gt_pq") throw Error(ErrorCode::parse, "unknown constraint kind '" + kind + "'");
    return {kind == "lt_one" ? Constraint::Kind::inside_unit_disk : Constraint::Kind::above_pq,
            monomial_from_json(j.at("monomial")), j.at("slack").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed constraint: ") + e.what());
  }
}

}  // namespace ellbailey
