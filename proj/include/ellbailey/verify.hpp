// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

// Numerical certificates for the integral identities.
//
// Each identity is a pair of expression trees built independently of each
// other (and of the Bailey lemma code), together with its validity region.
// A check evaluates both trees under one assignment and records the gap.
//
// Parameter names:
//   beta            t0..t4
//   transformation  t1, t2, t3, s1, s2, s3, t
//   id-seq:m        t, t0, t1, t2, s1..sm, u1..um, point w
//   ident1          t, t0, t1, t2, s1, s2, u1, u2, point w
//   identfin:m      t, t0, t1, t2, s1..s(m+1), u1..u(m+1), point w

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ellbailey/bailey.hpp"
#include "ellbailey/constraints.hpp"
#include "json.hpp"

namespace ellbailey {

struct IdentitySides {
  std::string id;
  BaileyExpr lhs;
  BaileyExpr rhs;
  ConstraintSet constraints;
};

/// κ ∮ ∏_{m=0}^4 Γ(t_m z^±)/Γ(z^{±2}, A z^±) dz/z = ∏_{m<s} Γ(t_m t_s) / ∏_m Γ(A/t_m),  A = ∏ t_m.
IdentitySides beta_integral_sides();
/// The symmetry transformation between two one-fold integrals, B = t1 t2 t3, S = s1 s2 s3.
IdentitySides transformation_sides();
/// m-fold integral obtained by iterating the chain step against its one-fold image.
IdentitySides id_seq_sides(int m);
/// One-fold integral against a two-fold integral (one dual then one chain step).
IdentitySides ident1_sides();
/// One-fold integral against an (m+1)-fold integral (m dual steps then one chain step).
IdentitySides identfin_sides(int m);

/// Parses "beta", "transformation", "id-seq:m", "ident1", "identfin:m".
/// Throws ParseError on an unknown identifier.
IdentitySides identity_sides(std::string_view id);

/// The largest number of integrations on either side.
int identity_dims(const IdentitySides& sides);

/// Default agreement tolerance: 1e-8 for one dimension, 1e-6 for two, 1e-3 beyond.
double default_identity_tol(int dims);

struct VerifyOptions {
  double tol = 0.0;  ///< agreement tolerance; 0 picks default_identity_tol
  int n_max = 0;     ///< grid cap per dimension; 0 picks the per-dimension default
  GridMethod method = GridMethod::table;
  ToleranceSpec gamma_tol{};
};

struct VerificationReport {
  std::string identity_id;
  Assignment assignment;
  Complex lhs;
  Complex rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::vector<int> nodes_used;  ///< grid size per dimension, lhs integrals first
  bool converged = false;
  double runtime_ms = 0.0;

  /// converged and rel_err <= tol.
  bool passed(double tol) const { return converged && rel_err <= tol; }
};

nlohmann::json to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

/// Deterministic rejection sampler over the parameters of `cs`. Moduli are
/// uniform in `moduli_range`, phases uniform; each point of `cs` is placed on
/// the unit circle. Throws SamplingExhausted after `max_tries` rejections.
Assignment sample_params(const ConstraintSet& cs, const BaseParams& base, std::uint64_t seed,
                         std::pair<double, double> moduli_range = {0.4, 0.8}, int max_tries = 100000);

/// Evaluates both sides. Throws ConstraintViolation outside the validity
/// region. A quadrature that stops at n_max gives converged = false.
VerificationReport verify(const IdentitySides& sides, const Assignment& a, const BaseParams& base,
                          const VerifyOptions& opts = {});

VerificationReport verify_beta_integral(const Assignment& a, const BaseParams& base, const VerifyOptions& opts = {});
VerificationReport verify_transformation(const Assignment& a, const BaseParams& base,
                                         const VerifyOptions& opts = {});
VerificationReport verify_id_seq(int m, const Assignment& a, const BaseParams& base, const VerifyOptions& opts = {});
VerificationReport verify_ident1(const Assignment& a, const BaseParams& base, const VerifyOptions& opts = {});
VerificationReport verify_identfin(int m, const Assignment& a, const BaseParams& base,
                                   const VerifyOptions& opts = {});

/// The m = 1 chain identity is the transformation with s1 → u1, s2 → s1 w,
/// s3 → s1/w, t1..t3 → t0..t2, up to the factor
/// Γ(t²s1², t²s1u1w^±)/Γ(s1², t², s1u1w^±) ∏_{r<j} Γ(t² t_r t_j)/Γ(t_r t_j) on both sides.
struct SeqTransformationMatch {
  VerificationReport id_seq;
  VerificationReport transformation;
  Complex factor;
  double lhs_gap = 0.0;  ///< |id_seq.lhs − factor·transformation.lhs| / |id_seq.lhs|
  double rhs_gap = 0.0;
};

/// The transformation assignment that corresponds to an id-seq:1 assignment.
Assignment transformation_from_id_seq(const Assignment& a);
SeqTransformationMatch match_id_seq_transformation(const Assignment& a, const BaseParams& base,
                                                   const VerifyOptions& opts = {});

/// True when the two expressions have the same outer and integrand factor
/// multisets after flattening, with equal κ and Pochhammer powers and the same
/// number of integrations.
bool same_flat_structure(const BaileyExpr& a, const BaileyExpr& b);

}  // namespace ellbailey
