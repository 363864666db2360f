// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

// Integral elliptic Bailey pairs.
//
// A pair (α, β) with respect to a pairing parameter T satisfies
//
//   β(w, T) = κ ∮_T Γ(T w^± z^±) α(z, T) dz/z,   κ = (p;p)∞ (q;q)∞ / (4πi).
//
// Both functions are kept as expression trees so that new pairs produced by the
// chain step (T → sT) and the dual step (sT → T) can be compared factor by
// factor against closed forms, serialized, and evaluated on the torus.

#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ellbailey/constraints.hpp"
#include "ellbailey/expr.hpp"
#include "ellbailey/quadrature.hpp"
#include "json.hpp"

namespace ellbailey {

/// Immutable expression tree for α- and β-functions.
class BaileyExpr {
 public:
  enum class Kind { gamma_product, scale, product, integral };

  /// A scalar: monomial · (q;q)∞^q_poch · (p;p)∞^p_poch.
  struct ScaleData {
    ParamMonomial monomial;
    int q_poch = 0;
    int p_poch = 0;
    friend bool operator==(const ScaleData&, const ScaleData&) = default;
  };

  static BaileyExpr gamma_product(std::vector<GammaFactor> factors);
  static BaileyExpr scale(ParamMonomial monomial, int q_poch = 0, int p_poch = 0);
  static BaileyExpr product(std::vector<BaileyExpr> children);
  /// κ^kappa_power ∮ body dvar/var.
  static BaileyExpr integral(std::string var, BaileyExpr body, int kappa_power);

  /// Empty product.
  BaileyExpr();

  Kind kind() const;
  const std::vector<GammaFactor>& factors() const;
  const ScaleData& scale_data() const;
  const std::vector<BaileyExpr>& children() const;
  const std::string& var() const;
  const BaileyExpr& body() const;
  int kappa_power() const;

  /// Variables bound by integral nodes, outermost first.
  std::vector<std::string> bound_vars() const;
  /// Variables referenced by factors and not bound inside the tree.
  std::set<std::string> free_vars() const;
  /// Renames a free variable. Throws ShapeError if `to` is bound in the tree.
  BaileyExpr rename_free(const std::string& from, const std::string& to) const;

  int integral_count() const;
  int total_kappa_power() const;
  /// Deepest chain of nested integral nodes.
  int nesting_depth() const;

  friend bool operator==(const BaileyExpr& a, const BaileyExpr& b);

 private:
  struct Node;
  explicit BaileyExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Every integral of a tree merged into one torus integral (the integrands are
/// bounded on the torus, so the order of integration is immaterial).
struct FlatExpr {
  ParamMonomial scale;
  int q_poch = 0;
  int p_poch = 0;
  int kappa_power = 0;
  std::vector<GammaFactor> outer;      // no dependence on integration variables
  Integrand integrand;                 // contour_vars = integration variables
};

FlatExpr flatten(const BaileyExpr& expr);

struct ExprValue {
  Complex value;
  QuadratureResult quadrature;  // nodes_used is empty when there is no integral
};

/// scale · ∏Γ(outer)^± · κ^k (2πi)^d · (mean of the integrand over T^d).
ExprValue evaluate(const BaileyExpr& expr, const Assignment& a, const BaseParams& base,
                   const QuadratureConfig& cfg, const ToleranceSpec& tol = {},
                   GridMethod method = GridMethod::table);

/// As above with the per-dimension default n_max.
ExprValue evaluate(const BaileyExpr& expr, const Assignment& a, const BaseParams& base, double target,
                   const ToleranceSpec& tol = {});

nlohmann::json to_json(const BaileyExpr& expr);
BaileyExpr expr_from_json(const nlohmann::json& j);

struct BaileyPair {
  BaileyExpr alpha;
  BaileyExpr beta;
  ParamMonomial t_expr;
  std::string point = "w";  ///< the free variable shared by α and β
  ConstraintSet constraints;
};

nlohmann::json to_json(const BaileyPair& pair);
BaileyPair pair_from_json(const nlohmann::json& j);

/// The pair obtained from the elliptic beta integral with t_3 = T w, t_4 = T/w:
///
///   α(z,T) = ∏_r Γ(t_r z^±) / Γ(z^{±2}, T² t_0 t_1 t_2 z^±),
///   β(w,T) = Γ(T²) ∏_{r<j} Γ(t_r t_j)/Γ(T² t_r t_j) · ∏_r Γ(T t_r w^±) / Γ(T t_0 t_1 t_2 w^±).
///
/// `t` is the pairing monomial T, usually a single symbol.
BaileyPair seed_pair(const std::string& t0, const std::string& t1, const std::string& t2, const ParamMonomial& t,
                     const std::string& point = "w");

/// Chain step, pair at T → pair at sT:
///   α' = Γ(T u w^±)/Γ(T s² u w^±) · α,
///   β' = κ Γ(T² s², T² s u w^±)/Γ(s², T², s u w^±) ∮ Γ(s w^± x^±, u x^±)/Γ(x^{±2}, T² s² u x^±) β(x) dx/x.
BaileyPair chain_step(const BaileyPair& pair, const std::string& s, const std::string& u);

/// Dual step, pair at sT → pair at T. Throws ShapeError unless s divides the
/// pairing monomial.
///   α' = κ Γ(s²T², u w^±)/Γ(s², T², w^{±2}, T² s² u w^±) ∮ Γ(T² s u x^±, s w^± x^±)/Γ(s u x^±) α(x) dx/x,
///   β' = Γ(T u w^±)/Γ(T s² u w^±) · β.
BaileyPair dual_step(const BaileyPair& pair, const std::string& s, const std::string& u);

struct StepParams {
  std::string s;
  std::string u;
};

BaileyPair iterate_chain(const BaileyPair& pair, const std::vector<StepParams>& steps);
BaileyPair iterate_dual(const BaileyPair& pair, const std::vector<StepParams>& steps);

/// A word over the two lemmas, e.g. "C(s1,u1);D(s2,u2)".
struct TreeWord {
  enum class Letter { chain, dual };
  struct Step {
    Letter letter;
    StepParams params;
    friend bool operator==(const Step& a, const Step& b) {
      return a.letter == b.letter && a.params.s == b.params.s && a.params.u == b.params.u;
    }
  };
  std::vector<Step> steps;

  /// Throws ParseError on malformed input or a letter whose s and u coincide.
  static TreeWord parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const TreeWord&, const TreeWord&) = default;
};

/// Applies the letters left to right.
BaileyPair tree_pair(const TreeWord& word, const BaileyPair& seed);

/// Seed on t0, t1, t2 whose pairing monomial t · ∏_{D letters} s is divisible
/// by every dual step of the word.
BaileyPair seed_for_word(const TreeWord& word);

struct ResidualReport {
  Complex beta;       ///< β(w)
  Complex transform;  ///< κ ∮ Γ(T w^± z^±) α(z) dz/z
  Complex residual;   ///< beta - transform
  bool converged = false;
  std::vector<int> nodes_used;
};

/// β(w) − κ ∮ Γ(T w^± z^±) α(z) dz/z for the pair under the assignment.
/// Throws ConstraintViolation if the pair's constraints fail.
ResidualReport pair_residual(const BaileyPair& pair, const Assignment& a, const BaseParams& base,
                             const QuadratureConfig& cfg, const ToleranceSpec& tol = {});

/// The right-hand side of the pair relation as an expression in the pair's point.
BaileyExpr pair_transform(const BaileyPair& pair);

/// Chooses x1, x2, … avoiding every name in `taken`.
std::string fresh_var(const std::set<std::string>& taken);

}  // namespace ellbailey
