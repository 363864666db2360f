// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ellbailey/error.hpp"

namespace ellbailey {

namespace {

using Factors = std::vector<GammaFactor>;
using M = ParamMonomial;

M sym(const std::string& name) { return M::symbol(name); }

M indexed(const char* prefix, int k) { return sym(prefix + std::to_string(k)); }

void add(Factors& out, const Factors& more) { out.insert(out.end(), more.begin(), more.end()); }

Factors pm(const M& c, std::initializer_list<std::string> vars, Location loc = Location::numerator) {
  return gamma_pm(c, std::vector<std::string>(vars), loc);
}

Factors den(const M& c, std::initializer_list<std::string> vars) { return pm(c, vars, Location::denominator); }

GammaFactor num1(const M& c) { return gamma_const(c); }
GammaFactor den1(const M& c) { return gamma_const(c, Location::denominator); }

// prefactor · κ^{k_1} ∮ … κ^{k_n} ∮ integrand, vars listed outermost first.
BaileyExpr integral_side(Factors prefactor, const std::vector<std::string>& vars, const std::vector<int>& kappas,
                         Factors integrand) {
  BaileyExpr body = BaileyExpr::gamma_product(std::move(integrand));
  for (std::size_t i = vars.size(); i-- > 0;) body = BaileyExpr::integral(vars[i], std::move(body), kappas[i]);
  return BaileyExpr::product({BaileyExpr::gamma_product(std::move(prefactor)), std::move(body)});
}

std::string xvar(int k) { return "x" + std::to_string(k); }

// ∏_{r<j} Γ(c t_r t_j)^{±}
void add_pairs(Factors& out, const std::vector<M>& ts, const M& c, Location loc) {
  for (std::size_t r = 0; r < ts.size(); ++r) {
    for (std::size_t j = r + 1; j < ts.size(); ++j) out.push_back(gamma_const(c * ts[r] * ts[j], loc));
  }
}

std::vector<M> triple() { return {sym("t0"), sym("t1"), sym("t2")}; }

void inside_all(ConstraintSet& cs, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    cs.add(Constraint::inside(sym(n)));
    cs.add_param(n);
  }
}

std::vector<std::string> numbered(const char* prefix, int from, int to) {
  std::vector<std::string> out;
  for (int k = from; k <= to; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

int side_dims(const BaileyExpr& e) { return static_cast<int>(e.bound_vars().size()); }

nlohmann::json pair_of(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Complex complex_of(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::parse, "complex value must be [re, im]");
  return {number_or_nan(j[0]), number_or_nan(j[1])};
}

nlohmann::json values_json(const ParamValues& v) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, z] : v) out[k] = pair_of(z);
  return out;
}

ParamValues values_of(const nlohmann::json& j) {
  ParamValues out;
  for (const auto& [k, z] : j.items()) out[k] = complex_of(z);
  return out;
}

int parse_level(std::string_view id, std::string_view prefix) {
  const std::string_view rest = id.substr(prefix.size());
  if (rest.empty() || rest.size() > 3 || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::parse, "identity '" + std::string(id) + "' needs a positive level, e.g. " +
                                      std::string(prefix) + "2");
  }
  const int m = std::stoi(std::string(rest));
  if (m < 1) throw Error(ErrorCode::parse, "identity level must be at least 1");
  return m;
}

}  // namespace

IdentitySides beta_integral_sides() {
  std::vector<M> ts;
  M a;
  for (int m = 0; m < 5; ++m) {
    ts.push_back(indexed("t", m));
    a *= ts.back();
  }
  Factors integrand;
  for (const auto& t : ts) add(integrand, pm(t, {"z"}));
  add(integrand, gamma_pm2("z"));
  add(integrand, den(a, {"z"}));

  Factors closed;
  add_pairs(closed, ts, M(), Location::numerator);
  for (const auto& t : ts) closed.push_back(den1(a / t));

  IdentitySides sides{"beta", integral_side({}, {"z"}, {1}, std::move(integrand)),
                      BaileyExpr::gamma_product(std::move(closed)), {}};
  inside_all(sides.constraints, numbered("t", 0, 4));
  sides.constraints.add(Constraint::above_pq(a));
  return sides;
}

IdentitySides transformation_sides() {
  const M t = sym("t");
  std::vector<M> ts, ss;
  M b, s;
  for (int j = 1; j <= 3; ++j) {
    ts.push_back(indexed("t", j));
    ss.push_back(indexed("s", j));
    b *= ts.back();
    s *= ss.back();
  }
  // One side as a function of (tt, ss); the other side swaps the roles.
  auto side = [&](const std::vector<M>& xs, const M& x, const std::vector<M>& ys, const M& y) {
    Factors prefactor;
    for (const auto& xj : xs) {
      prefactor.push_back(num1(x / xj));
      prefactor.push_back(den1(t.pow(2) * x / xj));
    }
    Factors integrand;
    for (std::size_t j = 0; j < 3; ++j) {
      add(integrand, pm(t * xs[j], {"z"}));
      add(integrand, pm(ys[j], {"z"}));
    }
    add(integrand, gamma_pm2("z"));
    add(integrand, den(t.pow(2) * y, {"z"}));
    add(integrand, den(t * x, {"z"}));
    return integral_side(std::move(prefactor), {"z"}, {0}, std::move(integrand));
  };

  IdentitySides sides{"transformation", side(ts, b, ss, s), side(ss, s, ts, b), {}};
  inside_all(sides.constraints, {"t1", "t2", "t3", "s1", "s2", "s3", "t"});
  sides.constraints.add(Constraint::above_pq(t.pow(2) * b));
  sides.constraints.add(Constraint::above_pq(t.pow(2) * s));
  return sides;
}

IdentitySides id_seq_sides(int m) {
  if (m < 1) throw Error(ErrorCode::domain, "id-seq needs m >= 1");
  const M t = sym("t");
  const auto tr = triple();
  const M b = tr[0] * tr[1] * tr[2];

  // m-fold side in x1..xm with x_{m+1} = w.
  Factors prefactor;
  Factors integrand;
  for (const auto& r : tr) add(integrand, pm(t * r, {"x1"}));
  add(integrand, den(t * b, {"x1"}));
  M before;  // ∏_{l<k} s_l²
  for (int k = 1; k <= m; ++k) {
    const M s = indexed("s", k), u = indexed("u", k);
    const M upto = before * s.pow(2);
    const std::string xk = xvar(k);
    const std::string next = k < m ? xvar(k + 1) : "w";
    prefactor.push_back(num1(t.pow(2) * upto));
    prefactor.push_back(den1(s.pow(2)));
    prefactor.push_back(den1(t.pow(2) * before));
    Factors& outer_of_step = k < m ? integrand : prefactor;
    add(outer_of_step, pm(t.pow(2) * before * s * u, {next}));
    add(outer_of_step, den(s * u, {next}));
    add(integrand, pm(s, {next, xk}));
    add(integrand, pm(u, {xk}));
    add(integrand, gamma_pm2(xk));
    add(integrand, den(t.pow(2) * upto * u, {xk}));
    before = upto;
  }
  std::vector<std::string> vars;
  std::vector<int> kappas;
  for (int k = m; k >= 1; --k) {
    vars.push_back(xvar(k));
    kappas.push_back(k == m ? 0 : 1);
  }
  BaileyExpr lhs = integral_side(std::move(prefactor), vars, kappas, std::move(integrand));

  // one-fold side
  Factors rpre{den1(t.pow(2))};
  add_pairs(rpre, tr, t.pow(2), Location::numerator);
  add_pairs(rpre, tr, M(), Location::denominator);
  Factors rint;
  M all_s;
  for (int k = 1; k <= m; ++k) all_s *= indexed("s", k);
  add(rint, pm(t * all_s, {"w", "x"}));
  for (const auto& r : tr) add(rint, pm(r, {"x"}));
  add(rint, gamma_pm2("x"));
  add(rint, den(t.pow(2) * b, {"x"}));
  M prev;  // ∏_{l<k} s_l
  for (int k = 1; k <= m; ++k) {
    const M s = indexed("s", k), u = indexed("u", k);
    add(rint, pm(t * prev * u, {"x"}));
    add(rint, den(t * prev * s.pow(2) * u, {"x"}));
    prev *= s;
  }
  BaileyExpr rhs = integral_side(std::move(rpre), {"x"}, {0}, std::move(rint));

  IdentitySides sides{"id-seq:" + std::to_string(m), std::move(lhs), std::move(rhs), {}};
  std::vector<std::string> names{"t", "t0", "t1", "t2"};
  for (int k = 1; k <= m; ++k) {
    names.push_back("s" + std::to_string(k));
    names.push_back("u" + std::to_string(k));
  }
  inside_all(sides.constraints, names);
  sides.constraints.add(Constraint::above_pq(t.pow(2) * b));
  M acc;
  for (int k = 1; k <= m; ++k) {
    acc *= indexed("s", k).pow(2);
    sides.constraints.add(Constraint::above_pq(t.pow(2) * acc * indexed("u", k)));
  }
  sides.constraints.add_point("w");
  return sides;
}

IdentitySides ident1_sides() {
  const M t = sym("t"), s1 = sym("s1"), s2 = sym("s2"), u1 = sym("u1"), u2 = sym("u2");
  const auto tr = triple();
  const M b = tr[0] * tr[1] * tr[2];
  const M t2 = t.pow(2);

  Factors lint = pm(s2, {"w", "x"});
  add(lint, pm(t * u1, {"x"}));
  add(lint, pm(u2, {"x"}));
  for (const auto& r : tr) add(lint, pm(t * s1 * r, {"x"}));
  add(lint, gamma_pm2("x"));
  add(lint, den(t2 * s2.pow(2) * u2, {"x"}));
  add(lint, den(t * s1.pow(2) * u1, {"x"}));
  add(lint, den(t * s1 * b, {"x"}));
  BaileyExpr lhs = integral_side({}, {"x"}, {0}, std::move(lint));

  Factors rpre;
  add_pairs(rpre, tr, t2 * s1.pow(2), Location::numerator);
  add_pairs(rpre, tr, M(), Location::denominator);
  rpre.push_back(num1(s2.pow(2)));
  add(rpre, pm(s2 * u2, {"w"}));
  rpre.push_back(den1(s1.pow(2)));
  rpre.push_back(den1(t2 * s2.pow(2)));
  add(rpre, den(t2 * s2 * u2, {"w"}));

  Factors rint = pm(s1, {"x2", "x1"});
  add(rint, pm(t * s2, {"w", "x2"}));
  add(rint, pm(t * u2, {"x2"}));
  add(rint, pm(u1, {"x2"}));
  add(rint, gamma_pm2("x2"));
  add(rint, den(t * s2.pow(2) * u2, {"x2"}));
  add(rint, den(t2 * s1.pow(2) * u1, {"x2"}));
  add(rint, pm(t2 * s1 * u1, {"x1"}));
  for (const auto& r : tr) add(rint, pm(r, {"x1"}));
  add(rint, gamma_pm2("x1"));
  add(rint, den(s1 * u1, {"x1"}));
  add(rint, den(t2 * s1.pow(2) * b, {"x1"}));
  BaileyExpr rhs = integral_side(std::move(rpre), {"x2", "x1"}, {1, 0}, std::move(rint));

  IdentitySides sides{"ident1", std::move(lhs), std::move(rhs), {}};
  inside_all(sides.constraints, {"t", "t0", "t1", "t2", "s1", "s2", "u1", "u2"});
  sides.constraints.add(Constraint::above_pq(t2 * s1.pow(2) * b));
  sides.constraints.add(Constraint::above_pq(t2 * s1.pow(2) * u2));
  sides.constraints.add(Constraint::above_pq(t2 * s2.pow(2) * u2));
  sides.constraints.add(Constraint::above_pq(t2 * s1.pow(2) * u1));
  sides.constraints.add_point("w");
  return sides;
}

IdentitySides identfin_sides(int m) {
  if (m < 1) throw Error(ErrorCode::domain, "identfin needs m >= 1");
  const M t = sym("t"), t2 = t.pow(2);
  const auto tr = triple();
  const M b = tr[0] * tr[1] * tr[2];
  const M sl = indexed("s", m + 1), ul = indexed("u", m + 1);
  M all_s;
  for (int k = 1; k <= m; ++k) all_s *= indexed("s", k);
  // ∏_{l=k+1}^m s_l
  auto tail = [&](int k) {
    M out;
    for (int l = k + 1; l <= m; ++l) out *= indexed("s", l);
    return out;
  };

  Factors lint = pm(sl, {"w", "x"});
  add(lint, pm(ul, {"x"}));
  add(lint, gamma_pm2("x"));
  add(lint, den(t2 * sl.pow(2) * ul, {"x"}));
  for (int k = 1; k <= m; ++k) {
    const M s = indexed("s", k), u = indexed("u", k);
    add(lint, pm(t * tail(k) * u, {"x"}));
    add(lint, den(t * tail(k) * s.pow(2) * u, {"x"}));
  }
  for (const auto& r : tr) add(lint, pm(t * all_s * r, {"x"}));
  add(lint, den(t * all_s * b, {"x"}));
  BaileyExpr lhs = integral_side({}, {"x"}, {0}, std::move(lint));

  Factors rpre{num1(sl.pow(2)), num1(t2), den1(t2 * sl.pow(2)), den1(t2 * all_s.pow(2))};
  add(rpre, pm(sl * ul, {"w"}));
  add(rpre, den(t2 * sl * ul, {"w"}));
  for (int k = 1; k <= m; ++k) {
    const M s = indexed("s", k);
    rpre.push_back(num1(tail(k - 1).pow(2) * t2));
    rpre.push_back(den1(s.pow(2)));
    rpre.push_back(den1(tail(k).pow(2) * t2));
  }
  add_pairs(rpre, tr, t2 * all_s.pow(2), Location::numerator);
  add_pairs(rpre, tr, M(), Location::denominator);

  const std::string xl = xvar(m + 1);
  Factors rint = pm(t * sl, {"w", xl});
  add(rint, pm(t * ul, {xl}));
  add(rint, den(t * sl.pow(2) * ul, {xl}));
  for (const auto& r : tr) add(rint, pm(r, {"x1"}));
  add(rint, gamma_pm2("x1"));
  add(rint, den(t2 * all_s.pow(2) * b, {"x1"}));
  for (int k = 1; k <= m; ++k) {
    const M s = indexed("s", k), u = indexed("u", k);
    const std::string xk = xvar(k), next = xvar(k + 1);
    add(rint, pm(u, {next}));
    add(rint, pm(tail(k).pow(2) * t2 * s * u, {xk}));
    add(rint, pm(s, {next, xk}));
    add(rint, gamma_pm2(next));
    add(rint, den(tail(k - 1).pow(2) * t2 * u, {next}));
    add(rint, den(s * u, {xk}));
  }
  std::vector<std::string> vars;
  std::vector<int> kappas;
  for (int k = m + 1; k >= 1; --k) {
    vars.push_back(xvar(k));
    kappas.push_back(k == 1 ? 0 : 1);
  }
  BaileyExpr rhs = integral_side(std::move(rpre), vars, kappas, std::move(rint));

  IdentitySides sides{"identfin:" + std::to_string(m), std::move(lhs), std::move(rhs), {}};
  std::vector<std::string> names{"t", "t0", "t1", "t2"};
  for (int k = 1; k <= m + 1; ++k) {
    names.push_back("s" + std::to_string(k));
    names.push_back("u" + std::to_string(k));
  }
  inside_all(sides.constraints, names);
  sides.constraints.add(Constraint::above_pq(t2 * all_s.pow(2) * b));
  sides.constraints.add(Constraint::above_pq(t2 * sl.pow(2) * ul));
  for (int k = 1; k <= m; ++k) {
    sides.constraints.add(Constraint::above_pq(t2 * tail(k - 1).pow(2) * indexed("u", k)));
  }
  sides.constraints.add_point("w");
  return sides;
}

IdentitySides identity_sides(std::string_view id) {
  if (id == "beta") return beta_integral_sides();
  if (id == "transformation") return transformation_sides();
  if (id == "ident1") return ident1_sides();
  if (id.starts_with("id-seq:")) return id_seq_sides(parse_level(id, "id-seq:"));
  if (id.starts_with("identfin:")) return identfin_sides(parse_level(id, "identfin:"));
  throw Error(ErrorCode::parse, "unknown identity '" + std::string(id) +
                                    "', expected beta, transformation, id-seq:m, ident1 or identfin:m");
}

int identity_dims(const IdentitySides& sides) { return std::max(side_dims(sides.lhs), side_dims(sides.rhs)); }

double default_identity_tol(int dims) {
  if (dims <= 1) return 1e-8;
  if (dims == 2) return 1e-6;
  return 1e-3;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"identity_id", r.identity_id},
          {"assignment", {{"params", values_json(r.assignment.params)}, {"points", values_json(r.assignment.vars)}}},
          {"lhs", pair_of(r.lhs)},
          {"rhs", pair_of(r.rhs)},
          {"abs_err", r.abs_err},
          {"rel_err", r.rel_err},
          {"nodes_used", r.nodes_used},
          {"converged", r.converged},
          {"runtime_ms", r.runtime_ms}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  try {
    VerificationReport r;
    r.identity_id = j.at("identity_id").get<std::string>();
    r.assignment.params = values_of(j.at("assignment").at("params"));
    r.assignment.vars = values_of(j.at("assignment").at("points"));
    r.lhs = complex_of(j.at("lhs"));
    r.rhs = complex_of(j.at("rhs"));
    r.abs_err = number_or_nan(j.at("abs_err"));
    r.rel_err = number_or_nan(j.at("rel_err"));
    r.nodes_used = j.at("nodes_used").get<std::vector<int>>();
    r.converged = j.at("converged").get<bool>();
    r.runtime_ms = number_or_nan(j.at("runtime_ms"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed report: ") + e.what());
  }
}

Assignment sample_params(const ConstraintSet& cs, const BaseParams& base, std::uint64_t seed,
                         std::pair<double, double> moduli_range, int max_tries) {
  const auto [lo, hi] = moduli_range;
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi)) throw Error(ErrorCode::domain, "moduli range must lie inside (0, 1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> modulus(lo, hi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Assignment a;
    for (const auto& name : cs.params) {
      const double r = modulus(rng);
      a.params[name] = std::polar(r, phase(rng));
    }
    for (const auto& name : cs.points) a.vars[name] = std::polar(1.0, phase(rng));
    const bool ok = std::all_of(cs.records.begin(), cs.records.end(),
                                [&](const Constraint& c) { return c.holds_with_margin(a.params, base); });
    if (ok) return a;
  }
  throw Error(ErrorCode::sampling_exhausted,
              "no admissible assignment after " + std::to_string(max_tries) + " draws");
}

VerificationReport verify(const IdentitySides& sides, const Assignment& a, const BaseParams& base,
                          const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  sides.constraints.check(a, base);
  const double tol = opts.tol > 0.0 ? opts.tol : default_identity_tol(identity_dims(sides));
  const double target = std::min(tol / 100.0, 1e-3);

  auto side_value = [&](const BaileyExpr& e) {
    QuadratureConfig cfg = QuadratureConfig::defaults_for(side_dims(e), target);
    if (opts.n_max > 0) {
      cfg.n_max = opts.n_max;
      cfg.n_start = std::min(cfg.n_start, cfg.n_max);
    }
    return evaluate(e, a, base, cfg, opts.gamma_tol, opts.method);
  };
  const ExprValue lhs = side_value(sides.lhs);
  const ExprValue rhs = side_value(sides.rhs);

  VerificationReport r;
  r.identity_id = sides.id;
  r.assignment = a;
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.abs_err = std::abs(lhs.value - rhs.value);
  r.rel_err = r.abs_err / std::max({std::abs(lhs.value), std::abs(rhs.value), 1e-300});
  r.nodes_used = lhs.quadrature.nodes_used;
  r.nodes_used.insert(r.nodes_used.end(), rhs.quadrature.nodes_used.begin(), rhs.quadrature.nodes_used.end());
  r.converged = lhs.quadrature.converged && rhs.quadrature.converged;
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

VerificationReport verify_beta_integral(const Assignment& a, const BaseParams& base, const VerifyOptions& opts) {
  return verify(beta_integral_sides(), a, base, opts);
}

VerificationReport verify_transformation(const Assignment& a, const BaseParams& base, const VerifyOptions& opts) {
  return verify(transformation_sides(), a, base, opts);
}

VerificationReport verify_id_seq(int m, const Assignment& a, const BaseParams& base, const VerifyOptions& opts) {
  return verify(id_seq_sides(m), a, base, opts);
}

VerificationReport verify_ident1(const Assignment& a, const BaseParams& base, const VerifyOptions& opts) {
  return verify(ident1_sides(), a, base, opts);
}

VerificationReport verify_identfin(int m, const Assignment& a, const BaseParams& base, const VerifyOptions& opts) {
  return verify(identfin_sides(m), a, base, opts);
}

Assignment transformation_from_id_seq(const Assignment& a) {
  auto get = [&](const ParamValues& v, const std::string& name) {
    auto it = v.find(name);
    if (it == v.end()) throw Error(ErrorCode::unknown_symbol, "'" + name + "' has no value");
    return it->second;
  };
  const Complex w = get(a.vars, "w");
  const Complex s1 = get(a.params, "s1");
  Assignment out;
  out.params["t"] = get(a.params, "t");
  out.params["t1"] = get(a.params, "t0");
  out.params["t2"] = get(a.params, "t1");
  out.params["t3"] = get(a.params, "t2");
  out.params["s1"] = get(a.params, "u1");
  out.params["s2"] = s1 * w;
  out.params["s3"] = s1 / w;
  return out;
}

SeqTransformationMatch match_id_seq_transformation(const Assignment& a, const BaseParams& base,
                                                   const VerifyOptions& opts) {
  SeqTransformationMatch out;
  out.id_seq = verify_id_seq(1, a, base, opts);
  out.transformation = verify_transformation(transformation_from_id_seq(a), base, opts);
  const M t = sym("t"), s1 = sym("s1"), u1 = sym("u1");
  Factors k{num1(t.pow(2) * s1.pow(2)), den1(s1.pow(2)), den1(t.pow(2))};
  add(k, pm(t.pow(2) * s1 * u1, {"w"}));
  add(k, den(s1 * u1, {"w"}));
  add_pairs(k, triple(), t.pow(2), Location::numerator);
  add_pairs(k, triple(), M(), Location::denominator);
  out.factor = evaluate(k, a, base, opts.gamma_tol);
  out.lhs_gap = std::abs(out.id_seq.lhs - out.factor * out.transformation.lhs) / std::abs(out.id_seq.lhs);
  out.rhs_gap = std::abs(out.id_seq.rhs - out.factor * out.transformation.rhs) / std::abs(out.id_seq.rhs);
  return out;
}

bool same_flat_structure(const BaileyExpr& a, const BaileyExpr& b) {
  const FlatExpr fa = flatten(a);
  const FlatExpr fb = flatten(b);
  auto vars_a = fa.integrand.contour_vars;
  auto vars_b = fb.integrand.contour_vars;
  std::sort(vars_a.begin(), vars_a.end());
  std::sort(vars_b.begin(), vars_b.end());
  return fa.scale == fb.scale && fa.q_poch == fb.q_poch && fa.p_poch == fb.p_poch &&
         fa.kappa_power == fb.kappa_power && vars_a == vars_b && normalized(fa.outer) == normalized(fb.outer) &&
         normalized(fa.integrand.factors) == normalized(fb.integrand.factors);
}

}  // namespace ellbailey
