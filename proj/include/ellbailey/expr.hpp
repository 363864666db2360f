// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

// Symbolic products of elliptic gamma factors.
//
// A factor is Γ(c · ∏ v^e) where c is a monomial in named parameters (with a
// numeric scale) and the v are contour or external variables. The shorthand
// Γ(t z^± x^±) expands into the four sign combinations; Γ(z^{±2}) into the two
// squares.

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ellbailey/ellgamma.hpp"
#include "json.hpp"

namespace ellbailey {

using ParamValues = std::map<std::string, Complex, std::less<>>;

/// scale · ∏ name^exponent over named parameters. Zero exponents are never stored.
class ParamMonomial {
 public:
  ParamMonomial() = default;
  explicit ParamMonomial(Complex scale) : scale_(scale) {}

  static ParamMonomial symbol(std::string name, int exponent = 1);

  const std::map<std::string, int, std::less<>>& exponents() const noexcept { return exponents_; }
  Complex scale() const noexcept { return scale_; }
  int exponent(std::string_view name) const;

  bool is_unit() const noexcept { return exponents_.empty() && scale_ == Complex(1.0, 0.0); }

  ParamMonomial pow(int n) const;
  ParamMonomial inverse() const { return pow(-1); }

  ParamMonomial& operator*=(const ParamMonomial& other);
  ParamMonomial& operator/=(const ParamMonomial& other) { return *this *= other.inverse(); }
  friend ParamMonomial operator*(ParamMonomial a, const ParamMonomial& b) { return a *= b; }
  friend ParamMonomial operator/(ParamMonomial a, const ParamMonomial& b) { return a /= b; }
  friend bool operator==(const ParamMonomial&, const ParamMonomial&) = default;

  /// Throws UnknownSymbol for a parameter missing from `values`.
  Complex evaluate(const ParamValues& values) const;

  std::string to_string() const;

 private:
  std::map<std::string, int, std::less<>> exponents_;
  Complex scale_{1.0, 0.0};
};

bool operator<(const ParamMonomial& a, const ParamMonomial& b);

enum class Location { numerator, denominator };

using VarExponents = std::map<std::string, int, std::less<>>;

struct GammaFactor {
  ParamMonomial coeff;
  VarExponents vars;
  Location loc = Location::numerator;

  bool depends_on(std::string_view var) const { return vars.find(var) != vars.end(); }
  std::string to_string() const;

  friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

bool operator<(const GammaFactor& a, const GammaFactor& b);

/// A product of gamma factors integrated over `contour_vars`. Variables used by
/// factors but absent from `contour_vars` are external points.
struct Integrand {
  std::vector<GammaFactor> factors;
  std::vector<std::string> contour_vars;
};

struct Assignment {
  ParamValues params;
  ParamValues vars;
};

struct SymbolTable {
  std::set<std::string, std::less<>> params;
  std::set<std::string, std::less<>> vars;
};

/// Γ(coeff · v1^± · v2^± ...) as 2^n factors.
std::vector<GammaFactor> gamma_pm(const ParamMonomial& coeff, const std::vector<std::string>& pm_vars,
                                  Location loc = Location::numerator);

/// Γ(coeff · v1^± ...) with every sign pattern and an extra fixed set of variable powers.
std::vector<GammaFactor> gamma_pm(const ParamMonomial& coeff, const VarExponents& fixed,
                                  const std::vector<std::pair<std::string, int>>& pm_vars, Location loc);

/// Γ(v^{±2}).
std::vector<GammaFactor> gamma_pm2(const std::string& var, Location loc = Location::denominator);

/// A single factor Γ(coeff) with no variable dependence.
GammaFactor gamma_const(const ParamMonomial& coeff, Location loc = Location::numerator);

/// Parses the ± shorthand. Terms are separated by '*' or whitespace:
/// `name`, `name^k`, `name^±`, `name^±k` (also `name^pm`, `name^pmk`), and an
/// optional leading numeric scale. Names must be declared in `symbols`.
std::vector<GammaFactor> expand_pm(std::string_view descriptor, const SymbolTable& symbols,
                                   Location loc = Location::numerator);

/// The complex argument of a factor under an assignment.
Complex factor_argument(const GammaFactor& factor, const Assignment& a);

/// ∏ Γ(num) / ∏ Γ(den). PoleError messages name the offending factor.
Complex evaluate(const Integrand& intg, const Assignment& a, const BaseParams& base,
                 const ToleranceSpec& tol = {});
Complex evaluate(const std::vector<GammaFactor>& factors, const Assignment& a, const BaseParams& base,
                 const ToleranceSpec& tol = {});

/// Distance between the unit circle and the nearest pole of the integrand in
/// `var`, with every other variable fixed by the assignment. Poles are
/// enumerated over the same (j,k) lattice the gamma evaluation truncates at.
/// Throws DegenerateError if a pole sits on the circle.
double pole_margin(const Integrand& intg, const Assignment& a, const BaseParams& base, std::string_view var,
                   const ToleranceSpec& tol = {});

/// Sorts the factors and cancels every numerator/denominator pair that is
/// literally identical. Used for structural comparison only.
std::vector<GammaFactor> normalized(std::vector<GammaFactor> factors);

nlohmann::json to_json(const ParamMonomial& m);
ParamMonomial monomial_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GammaFactor& f);
GammaFactor factor_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Integrand& intg);
Integrand integrand_from_json(const nlohmann::json& j);

}  // namespace ellbailey
