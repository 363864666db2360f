// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/ellgamma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ellbailey/error.hpp"

namespace ellbailey {

namespace {

std::string show(Complex z) {
  return "(" + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i)";
}

void require_base(Complex q, const char* what) {
  if (!(std::abs(q) < 1.0)) {
    throw Error(ErrorCode::domain, std::string(what) + " must lie strictly inside the unit disk, got " + show(q));
  }
}

// Shared kernel of Γ and 1/Γ. Level k of the outer product contributes
// (q p^{k+1}/z; q)∞ / (z p^k; q)∞.
Complex gamma_kernel(Complex z, const BaseParams& base, const ToleranceSpec& tol, bool reciprocal) {
  tol.validate();
  if (z == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::domain, "elliptic gamma is undefined at z = 0");
  }
  const Complex q = base.q();
  const Complex p = base.p();
  const double abs_q = std::abs(q);
  const double abs_p = std::abs(p);
  const double abs_z = std::abs(z);
  const double eps = tol.target / 100.0;
  const Complex pq_over_z = q * p / z;

  std::int64_t levels = 1;
  if (abs_p > 0.0) {
    const double lead = (std::abs(pq_over_z) + abs_z) / ((1.0 - abs_p) * (1.0 - abs_q));
    double tail = lead * abs_p;
    while (tail >= eps) {
      tail *= abs_p;
      if (++levels > tol.truncation_cap) {
        throw Error(ErrorCode::non_convergent, "elliptic gamma: p-levels exceed the truncation cap");
      }
    }
  }

  Complex num(1.0, 0.0);
  Complex den(1.0, 0.0);
  Complex p_power(1.0, 0.0);
  std::int64_t used = 0;
  for (std::int64_t k = 0; k < levels; ++k) {
    Complex a = pq_over_z * p_power;  // zero side: 1 - a q^j
    Complex b = z * p_power;          // pole side: 1 - b q^j
    const std::int64_t terms = std::max(pochhammer_terms(std::abs(a), abs_q, tol),
                                        pochhammer_terms(std::abs(b), abs_q, tol));
    used += terms;
    if (used > tol.truncation_cap) {
      throw Error(ErrorCode::non_convergent, "elliptic gamma: product size exceeds the truncation cap");
    }
    for (std::int64_t j = 0; j < terms; ++j) {
      const Complex pole_factor = 1.0 - b;
      // |z - q^{-j}p^{-k}| = |1 - b| |z| / |b|
      if (std::abs(pole_factor) * abs_z < tol.pole_exclusion * std::abs(b)) {
        throw Error(ErrorCode::pole, "elliptic gamma: argument " + show(z) + " is at a pole q^-" +
                                         std::to_string(j) + " p^-" + std::to_string(k));
      }
      const Complex zero_factor = 1.0 - a;
      // |z - q^{j+1}p^{k+1}| = |z| |1 - a|
      if (reciprocal && abs_z * std::abs(zero_factor) < tol.pole_exclusion) {
        throw Error(ErrorCode::pole, "reciprocal elliptic gamma: argument " + show(z) + " is at a zero q^" +
                                         std::to_string(j + 1) + " p^" + std::to_string(k + 1));
      }
      num *= zero_factor;
      den *= pole_factor;
      a *= q;
      b *= q;
    }
    p_power *= p;
  }
  return reciprocal ? den / num : num / den;
}

}  // namespace

void ToleranceSpec::validate() const {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorCode::domain, "tolerance target must lie in (0, 1)");
  }
  if (truncation_cap < 1) {
    throw Error(ErrorCode::domain, "truncation cap must be at least 1");
  }
  if (!(pole_exclusion >= 0.0)) {
    throw Error(ErrorCode::domain, "pole exclusion radius must be non-negative");
  }
}

BaseParams::BaseParams(Complex q, Complex p, const ToleranceSpec& tol) : q_(q), p_(p) {
  require_base(q, "q");
  require_base(p, "p");
  q_poch_ = qpochhammer_infinite(q, q, tol);
  p_poch_ = qpochhammer_infinite(p, p, tol);
}

std::int64_t pochhammer_terms(double abs_a, double abs_q, const ToleranceSpec& tol) {
  if (abs_a == 0.0) return 0;
  if (abs_q == 0.0) return 1;
  const double eps = tol.target / 100.0;
  double bound = abs_a / (1.0 - abs_q);
  std::int64_t n = 0;
  while (bound >= eps) {
    bound *= abs_q;
    if (++n > tol.truncation_cap) {
      throw Error(ErrorCode::non_convergent, "q-Pochhammer truncation exceeds the cap of " +
                                                 std::to_string(tol.truncation_cap) + " terms");
    }
  }
  return n;
}

Complex qpochhammer_infinite(Complex a, Complex q, const ToleranceSpec& tol) {
  tol.validate();
  require_base(q, "q-Pochhammer base");
  const std::int64_t terms = pochhammer_terms(std::abs(a), std::abs(q), tol);
  Complex result(1.0, 0.0);
  Complex term = a;
  for (std::int64_t k = 0; k < terms; ++k) {
    result *= 1.0 - term;
    term *= q;
  }
  return result;
}

Complex theta(Complex z, Complex p, const ToleranceSpec& tol) {
  if (z == Complex(0.0, 0.0)) {
    throw Error(ErrorCode::domain, "theta function is undefined at z = 0");
  }
  return qpochhammer_infinite(z, p, tol) * qpochhammer_infinite(p / z, p, tol);
}

Complex elliptic_gamma(Complex z, const BaseParams& base, const ToleranceSpec& tol) {
  return gamma_kernel(z, base, tol, false);
}

Complex reciprocal_elliptic_gamma(Complex z, const BaseParams& base, const ToleranceSpec& tol) {
  return gamma_kernel(z, base, tol, true);
}

Complex kappa(const BaseParams& base) {
  return base.p_poch() * base.q_poch() / Complex(0.0, 4.0 * std::numbers::pi);
}

Complex kappa_contour_weight(const BaseParams& base) { return base.p_poch() * base.q_poch() / 2.0; }

int lattice_depth(double abs_base, const ToleranceSpec& tol) {
  if (abs_base == 0.0) return 1;
  const double eps = tol.target / 100.0;
  int n = 1;
  double r = abs_base;
  while (r >= eps && n < 100000) {
    r *= abs_base;
    ++n;
  }
  return n;
}

}  // namespace ellbailey
