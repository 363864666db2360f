// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>

namespace ellbailey {

using Complex = std::complex<double>;

/// Accuracy controls shared by every infinite product in the library.
///
/// `target` is the relative accuracy asked of a product. Truncation indices are
/// picked from geometric tail bounds so that the neglected tail stays below
/// target / 100. `truncation_cap` bounds the total number of factors one call
/// may use; exceeding it raises NonConvergent. `pole_exclusion` is the radius,
/// in argument space, around a pole of Γ inside which evaluation is refused.
struct ToleranceSpec {
  double target = 1e-14;
  std::int64_t truncation_cap = 4'000'000;
  double pole_exclusion = 1e-6;

  void validate() const;
};

/// The two bases q, p with |q|, |p| < 1 and the products (q;q)∞, (p;p)∞.
class BaseParams {
 public:
  BaseParams(Complex q, Complex p, const ToleranceSpec& tol = {});

  Complex q() const noexcept { return q_; }
  Complex p() const noexcept { return p_; }
  /// (q;q)∞
  Complex q_poch() const noexcept { return q_poch_; }
  /// (p;p)∞
  Complex p_poch() const noexcept { return p_poch_; }

 private:
  Complex q_;
  Complex p_;
  Complex q_poch_;
  Complex p_poch_;
};

/// Number of factors (a;q)∞ needs so that |a||q|^n / (1 - |q|) < tol.target / 100.
std::int64_t pochhammer_terms(double abs_a, double abs_q, const ToleranceSpec& tol);

/// (a;q)∞ = ∏_{k≥0} (1 - a q^k).
Complex qpochhammer_infinite(Complex a, Complex q, const ToleranceSpec& tol = {});

/// θ(z;p) = (z;p)∞ (p/z;p)∞.
Complex theta(Complex z, Complex p, const ToleranceSpec& tol = {});

/// The elliptic gamma function
///
///   Γ(z;q,p) = ∏_{j,k≥0} (1 - z⁻¹ q^{j+1} p^{k+1}) / (1 - z q^j p^k),
///
/// evaluated as ∏_k (q p^{k+1}/z; q)∞ / (z p^k; q)∞ with both truncation
/// levels chosen from tail bounds. Throws PoleError within
/// `tol.pole_exclusion` of a pole z = q^{-j} p^{-k}.
Complex elliptic_gamma(Complex z, const BaseParams& base, const ToleranceSpec& tol = {});

/// 1/Γ(z;q,p). Refuses both the poles of Γ and its zeros z = q^{j+1} p^{k+1}.
Complex reciprocal_elliptic_gamma(Complex z, const BaseParams& base, const ToleranceSpec& tol = {});

/// κ = (p;p)∞ (q;q)∞ / (4πi).
Complex kappa(const BaseParams& base);

/// κ·2πi = (p;p)∞ (q;q)∞ / 2, the weight of one κ-normalized contour mean.
Complex kappa_contour_weight(const BaseParams& base);

/// Depth of the lattice q^j (or p^k) needed before |base|^n drops below
/// tol.target / 100; 1 when the base is zero.
int lattice_depth(double abs_base, const ToleranceSpec& tol);

}  // namespace ellbailey
