// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

// Trapezoidal quadrature on the unit torus T^m.
//
// All grids are tensor products of the N points  φ·ω^k,  ω = e^{2πi/N},
// k = 0..N-1, with a fixed rotation φ shared by every N. The rotation keeps the
// nodes off z = ±1, where factors such as 1/Γ(z^{±2}) sit on poles of Γ, and
// since φ does not depend on N the N-grid is contained in the 2N-grid.
// The mean over the grid integrates every Laurent monomial z^n with |n| < N
// exactly.

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ellbailey/ellgamma.hpp"
#include "ellbailey/expr.hpp"

namespace ellbailey {

/// Rotation of every grid, in turns.
inline constexpr double kGridRotationTurns = 1.0 / (3.0 * 8192.0);

Complex grid_rotation();

/// The k-th of n grid nodes.
Complex grid_node(int k, int n);

struct QuadratureConfig {
  int n_start = 16;
  int n_max = 1024;
  double target = 1e-10;

  void validate() const;

  /// n_start = 16 with n_max 1024 / 256 / 64 for one, two and three or more dimensions.
  static QuadratureConfig defaults_for(int dims, double target);
};

struct QuadratureResult {
  Complex value;
  std::vector<int> nodes_used;
  double est_error = 0.0;
  bool converged = false;
};

using TorusFunction = std::function<Complex(std::span<const Complex>)>;

/// Mean of f over the n^dims grid, i.e. (2πi)^{-m} ∮…∮ f dz_1/z_1 … dz_m/z_m.
/// `loop_order` lists the dimensions from outermost to innermost summation;
/// empty means 0, 1, …, dims-1.
Complex grid_mean(const TorusFunction& f, int dims, int n, std::span<const int> loop_order = {});

/// Adaptive doubling of grid_mean. With one dimension the result is accepted at
/// the first doubling whose change |I_2N - I_N| is within
/// target·max(1, |I_2N|); with two or more dimensions two successive doublings
/// must pass. At n_max the best estimate comes back with converged = false.
QuadratureResult contour_mean(const TorusFunction& f, int dims, const QuadratureConfig& cfg);

/// {Γ(c·ρ^E·ω^r)}_{r=0..n-1}: the values a factor takes on the n-grid, where c
/// is the factor's coefficient with every non-contour variable substituted,
/// E the sum of its contour exponents and ρ the rotation. A node with indices
/// k_i reads entry (Σ e_i k_i) mod n.
std::vector<Complex> factor_table(const GammaFactor& factor, const Assignment& a, const BaseParams& base, int n,
                                  const std::vector<std::string>& contour_vars, const ToleranceSpec& tol = {},
                                  Complex rotation = Complex(1.0, 0.0));

enum class GridMethod {
  table,  ///< per-factor lookup tables indexed by exponent sums
  naive,  ///< fresh gamma evaluations at every node
};

/// Mean of a gamma-product integrand over the n-grid in its contour variables.
/// Non-contour variables are read from the assignment.
Complex integrand_grid_mean(const Integrand& intg, const Assignment& a, const BaseParams& base, int n,
                            GridMethod method = GridMethod::table, const ToleranceSpec& tol = {},
                            std::span<const int> loop_order = {});

/// contour_mean for a gamma-product integrand. The table method keeps the
/// tables between doublings and only evaluates the new odd entries.
QuadratureResult integrate(const Integrand& intg, const Assignment& a, const BaseParams& base,
                           const QuadratureConfig& cfg, GridMethod method = GridMethod::table,
                           const ToleranceSpec& tol = {});

/// Neumaier-compensated complex sum.
class CompensatedSum {
 public:
  void add(Complex x);
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void step(double& sum, double& comp, double x);
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

}  // namespace ellbailey
