// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/bailey.hpp"

#include <algorithm>
#include <cctype>
#include <numbers>

#include "ellbailey/error.hpp"

namespace ellbailey {

struct BaileyExpr::Node {
  Kind kind = Kind::product;
  std::vector<GammaFactor> factors;
  ScaleData scale;
  std::vector<BaileyExpr> children;  // the body of an integral is children[0]
  std::string var;
  int kappa_power = 0;
};

namespace {

using Factors = std::vector<GammaFactor>;

void append(Factors& out, const Factors& more) { out.insert(out.end(), more.begin(), more.end()); }

ParamMonomial sym(const std::string& name) { return ParamMonomial::symbol(name); }

Complex ipow(Complex x, int n) {
  Complex r(1.0, 0.0);
  const Complex b = n < 0 ? 1.0 / x : x;
  for (int i = 0; i < std::abs(n); ++i) r *= b;
  return r;
}

void collect_bound(const BaileyExpr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
    case BaileyExpr::Kind::product:
      for (const auto& c : e.children()) collect_bound(c, out);
      break;
    case BaileyExpr::Kind::integral:
      out.push_back(e.var());
      collect_bound(e.body(), out);
      break;
    default:
      break;
  }
}

void collect_free(const BaileyExpr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e.kind()) {
    case BaileyExpr::Kind::gamma_product:
      for (const auto& f : e.factors()) {
        for (const auto& [v, _] : f.vars) {
          if (!bound.count(v)) out.insert(v);
        }
      }
      break;
    case BaileyExpr::Kind::product:
      for (const auto& c : e.children()) collect_free(c, bound, out);
      break;
    case BaileyExpr::Kind::integral: {
      const bool inserted = bound.insert(e.var()).second;
      collect_free(e.body(), bound, out);
      if (inserted) bound.erase(e.var());
      break;
    }
    case BaileyExpr::Kind::scale:
      break;
  }
}

BaileyExpr rename_impl(const BaileyExpr& e, const std::string& from, const std::string& to) {
  switch (e.kind()) {
    case BaileyExpr::Kind::gamma_product: {
      Factors renamed = e.factors();
      for (auto& f : renamed) {
        auto it = f.vars.find(from);
        if (it == f.vars.end()) continue;
        const int exp = it->second;
        f.vars.erase(it);
        f.vars[to] += exp;
        if (f.vars[to] == 0) f.vars.erase(to);
      }
      return BaileyExpr::gamma_product(std::move(renamed));
    }
    case BaileyExpr::Kind::product: {
      std::vector<BaileyExpr> kids;
      for (const auto& c : e.children()) kids.push_back(rename_impl(c, from, to));
      return BaileyExpr::product(std::move(kids));
    }
    case BaileyExpr::Kind::integral:
      if (e.var() == from) return e;  // shadowed
      return BaileyExpr::integral(e.var(), rename_impl(e.body(), from, to), e.kappa_power());
    case BaileyExpr::Kind::scale:
      return e;
  }
  return e;
}

struct FlattenState {
  FlatExpr flat;
  Factors factors;
  std::set<std::string> all_bound;
};

void flatten_into(const BaileyExpr& e, FlattenState& st, std::set<std::string>& scope) {
  switch (e.kind()) {
    case BaileyExpr::Kind::gamma_product:
      for (const auto& f : e.factors()) {
        for (const auto& [v, _] : f.vars) {
          if (st.all_bound.count(v) && !scope.count(v)) {
            throw Error(ErrorCode::shape, "variable '" + v + "' is used outside the integral that binds it");
          }
        }
        st.factors.push_back(f);
      }
      break;
    case BaileyExpr::Kind::scale:
      st.flat.scale *= e.scale_data().monomial;
      st.flat.q_poch += e.scale_data().q_poch;
      st.flat.p_poch += e.scale_data().p_poch;
      break;
    case BaileyExpr::Kind::product:
      for (const auto& c : e.children()) flatten_into(c, st, scope);
      break;
    case BaileyExpr::Kind::integral:
      st.flat.integrand.contour_vars.push_back(e.var());
      st.flat.kappa_power += e.kappa_power();
      scope.insert(e.var());
      flatten_into(e.body(), st, scope);
      scope.erase(e.var());
      break;
  }
}

BaileyExpr ratio(const ParamMonomial& num, const ParamMonomial& den, const std::string& w) {
  Factors f = gamma_pm(num, {w}, Location::numerator);
  append(f, gamma_pm(den, {w}, Location::denominator));
  return BaileyExpr::gamma_product(std::move(f));
}

void require_step_names(const std::string& s, const std::string& u) {
  if (s.empty() || u.empty() || s == u) {
    throw Error(ErrorCode::shape, "a lemma step needs two distinct non-empty parameter names");
  }
}

std::string trim(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- BaileyExpr

BaileyExpr::BaileyExpr() : node_(std::make_shared<const Node>()) {}

BaileyExpr BaileyExpr::gamma_product(std::vector<GammaFactor> factors) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::gamma_product;
  n->factors = std::move(factors);
  return BaileyExpr(std::move(n));
}

BaileyExpr BaileyExpr::scale(ParamMonomial monomial, int q_poch, int p_poch) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::scale;
  n->scale = {std::move(monomial), q_poch, p_poch};
  return BaileyExpr(std::move(n));
}

BaileyExpr BaileyExpr::product(std::vector<BaileyExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->children = std::move(children);
  return BaileyExpr(std::move(n));
}

BaileyExpr BaileyExpr::integral(std::string var, BaileyExpr body, int kappa_power) {
  if (var.empty()) throw Error(ErrorCode::shape, "integral needs a variable name");
  auto bound = body.bound_vars();
  if (std::find(bound.begin(), bound.end(), var) != bound.end()) {
    throw Error(ErrorCode::shape, "variable '" + var + "' is already bound inside the integrand");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::integral;
  n->var = std::move(var);
  n->children.push_back(std::move(body));
  n->kappa_power = kappa_power;
  return BaileyExpr(std::move(n));
}

BaileyExpr::Kind BaileyExpr::kind() const { return node_->kind; }

const std::vector<GammaFactor>& BaileyExpr::factors() const {
  if (node_->kind != Kind::gamma_product) throw Error(ErrorCode::shape, "not a gamma product node");
  return node_->factors;
}

const BaileyExpr::ScaleData& BaileyExpr::scale_data() const {
  if (node_->kind != Kind::scale) throw Error(ErrorCode::shape, "not a scale node");
  return node_->scale;
}

const std::vector<BaileyExpr>& BaileyExpr::children() const {
  if (node_->kind != Kind::product) throw Error(ErrorCode::shape, "not a product node");
  return node_->children;
}

const std::string& BaileyExpr::var() const {
  if (node_->kind != Kind::integral) throw Error(ErrorCode::shape, "not an integral node");
  return node_->var;
}

const BaileyExpr& BaileyExpr::body() const {
  if (node_->kind != Kind::integral) throw Error(ErrorCode::shape, "not an integral node");
  return node_->children.front();
}

int BaileyExpr::kappa_power() const {
  if (node_->kind != Kind::integral) throw Error(ErrorCode::shape, "not an integral node");
  return node_->kappa_power;
}

std::vector<std::string> BaileyExpr::bound_vars() const {
  std::vector<std::string> out;
  collect_bound(*this, out);
  return out;
}

std::set<std::string> BaileyExpr::free_vars() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

BaileyExpr BaileyExpr::rename_free(const std::string& from, const std::string& to) const {
  if (from == to) return *this;
  auto bound = bound_vars();
  if (std::find(bound.begin(), bound.end(), to) != bound.end()) {
    throw Error(ErrorCode::shape, "cannot rename to '" + to + "': the name is bound in the expression");
  }
  return rename_impl(*this, from, to);
}

int BaileyExpr::integral_count() const { return static_cast<int>(bound_vars().size()); }

int BaileyExpr::total_kappa_power() const {
  switch (kind()) {
    case Kind::product: {
      int k = 0;
      for (const auto& c : children()) k += c.total_kappa_power();
      return k;
    }
    case Kind::integral:
      return kappa_power() + body().total_kappa_power();
    default:
      return 0;
  }
}

int BaileyExpr::nesting_depth() const {
  switch (kind()) {
    case Kind::product: {
      int d = 0;
      for (const auto& c : children()) d = std::max(d, c.nesting_depth());
      return d;
    }
    case Kind::integral:
      return 1 + body().nesting_depth();
    default:
      return 0;
  }
}

bool operator==(const BaileyExpr& a, const BaileyExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.factors == y.factors && x.scale == y.scale && x.var == y.var &&
         x.kappa_power == y.kappa_power && x.children == y.children;
}

FlatExpr flatten(const BaileyExpr& expr) {
  FlattenState st;
  const auto bound = expr.bound_vars();
  st.all_bound.insert(bound.begin(), bound.end());
  if (st.all_bound.size() != bound.size()) {
    throw Error(ErrorCode::shape, "an integration variable is bound twice");
  }
  std::set<std::string> scope;
  flatten_into(expr, st, scope);
  const auto& ivars = st.flat.integrand.contour_vars;
  for (auto& f : st.factors) {
    const bool inner = std::any_of(ivars.begin(), ivars.end(), [&](const std::string& v) { return f.depends_on(v); });
    (inner ? st.flat.integrand.factors : st.flat.outer).push_back(std::move(f));
  }
  return std::move(st.flat);
}

ExprValue evaluate(const BaileyExpr& expr, const Assignment& a, const BaseParams& base,
                   const QuadratureConfig& cfg, const ToleranceSpec& tol, GridMethod method) {
  const FlatExpr flat = flatten(expr);
  const int dims = static_cast<int>(flat.integrand.contour_vars.size());
  Complex value = flat.scale.evaluate(a.params) * ipow(base.q_poch(), flat.q_poch) *
                  ipow(base.p_poch(), flat.p_poch) * evaluate(flat.outer, a, base, tol);
  // κ^k (2πi)^d = (κ·2πi)^k (2πi)^{d-k}
  value *= ipow(kappa_contour_weight(base), flat.kappa_power) *
           ipow(Complex(0.0, 2.0 * std::numbers::pi), dims - flat.kappa_power);
  ExprValue out{value, {Complex(1.0, 0.0), {}, 0.0, true}};
  if (dims > 0) {
    out.quadrature = integrate(flat.integrand, a, base, cfg, method, tol);
    out.value *= out.quadrature.value;
  }
  return out;
}

ExprValue evaluate(const BaileyExpr& expr, const Assignment& a, const BaseParams& base, double target,
                   const ToleranceSpec& tol) {
  const int dims = static_cast<int>(expr.bound_vars().size());
  return evaluate(expr, a, base, QuadratureConfig::defaults_for(dims, target), tol);
}

nlohmann::json to_json(const BaileyExpr& expr) {
  switch (expr.kind()) {
    case BaileyExpr::Kind::gamma_product: {
      nlohmann::json fs = nlohmann::json::array();
      for (const auto& f : expr.factors()) fs.push_back(to_json(f));
      return {{"gamma", fs}};
    }
    case BaileyExpr::Kind::scale: {
      nlohmann::json s = to_json(expr.scale_data().monomial);
      s["q_poch"] = expr.scale_data().q_poch;
      s["p_poch"] = expr.scale_data().p_poch;
      return {{"scalar", s}};
    }
    case BaileyExpr::Kind::product: {
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& c : expr.children()) cs.push_back(to_json(c));
      return {{"product", cs}};
    }
    case BaileyExpr::Kind::integral:
      return {{"int", expr.var()}, {"kappa", expr.kappa_power()}, {"body", to_json(expr.body())}};
  }
  return nullptr;
}

BaileyExpr expr_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("gamma")) {
      Factors fs;
      for (const auto& f : j.at("gamma")) fs.push_back(factor_from_json(f));
      return BaileyExpr::gamma_product(std::move(fs));
    }
    if (j.contains("scalar")) {
      const auto& s = j.at("scalar");
      return BaileyExpr::scale(monomial_from_json(s), s.value("q_poch", 0), s.value("p_poch", 0));
    }
    if (j.contains("product")) {
      std::vector<BaileyExpr> cs;
      for (const auto& c : j.at("product")) cs.push_back(expr_from_json(c));
      return BaileyExpr::product(std::move(cs));
    }
    if (j.contains("int")) {
      return BaileyExpr::integral(j.at("int").get<std::string>(), expr_from_json(j.at("body")),
                                  j.at("kappa").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed expression: ") + e.what());
  }
  throw Error(ErrorCode::parse, "expression node must be one of gamma, scalar, product, int");
}

nlohmann::json to_json(const BaileyPair& pair) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& c : pair.constraints.records) records.push_back(to_json(c));
  return {{"t_expr", to_json(pair.t_expr)},
          {"point", pair.point},
          {"alpha", to_json(pair.alpha)},
          {"beta", to_json(pair.beta)},
          {"constraints",
           {{"records", records}, {"params", pair.constraints.params}, {"points", pair.constraints.points}}}};
}

BaileyPair pair_from_json(const nlohmann::json& j) {
  try {
    BaileyPair pair;
    pair.t_expr = monomial_from_json(j.at("t_expr"));
    pair.point = j.at("point").get<std::string>();
    pair.alpha = expr_from_json(j.at("alpha"));
    pair.beta = expr_from_json(j.at("beta"));
    const auto& cs = j.at("constraints");
    for (const auto& c : cs.at("records")) pair.constraints.records.push_back(constraint_from_json(c));
    pair.constraints.params = cs.at("params").get<std::vector<std::string>>();
    pair.constraints.points = cs.at("points").get<std::vector<std::string>>();
    return pair;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed pair: ") + e.what());
  }
}

// ---------------------------------------------------------------- pairs

std::string fresh_var(const std::set<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string name = "x" + std::to_string(i);
    if (!taken.count(name)) return name;
  }
}

namespace {

std::set<std::string> names_in(const BaileyExpr& e, const std::string& point) {
  auto taken = e.free_vars();
  for (auto& v : e.bound_vars()) taken.insert(v);
  taken.insert(point);
  return taken;
}

void add_step_constraints(ConstraintSet& cs, const ParamMonomial& t, const ParamMonomial& s, const ParamMonomial& u) {
  cs.add(Constraint::inside(t));
  cs.add(Constraint::inside(s));
  cs.add(Constraint::inside(u));
  cs.add(Constraint::above_pq(t.pow(2) * s.pow(2) * u));
}

}  // namespace

BaileyPair seed_pair(const std::string& t0, const std::string& t1, const std::string& t2, const ParamMonomial& t,
                     const std::string& point) {
  const std::vector<std::string> names{t0, t1, t2};
  const ParamMonomial prod = sym(t0) * sym(t1) * sym(t2);
  const ParamMonomial t2m = t.pow(2);

  Factors alpha;
  for (const auto& r : names) append(alpha, gamma_pm(sym(r), {point}));
  append(alpha, gamma_pm2(point));
  append(alpha, gamma_pm(t2m * prod, {point}, Location::denominator));

  Factors beta;
  beta.push_back(gamma_const(t2m));
  for (std::size_t r = 0; r < names.size(); ++r) {
    for (std::size_t j = r + 1; j < names.size(); ++j) {
      beta.push_back(gamma_const(sym(names[r]) * sym(names[j])));
      beta.push_back(gamma_const(t2m * sym(names[r]) * sym(names[j]), Location::denominator));
    }
  }
  for (const auto& r : names) append(beta, gamma_pm(t * sym(r), {point}));
  append(beta, gamma_pm(t * prod, {point}, Location::denominator));

  BaileyPair pair{BaileyExpr::gamma_product(std::move(alpha)), BaileyExpr::gamma_product(std::move(beta)), t, point,
                  {}};
  for (const auto& r : names) {
    pair.constraints.add(Constraint::inside(sym(r)));
    pair.constraints.add_param(r);
  }
  pair.constraints.add(Constraint::inside(t));
  pair.constraints.add(Constraint::above_pq(t2m * prod));
  for (const auto& [name, _] : t.exponents()) pair.constraints.add_param(name);
  pair.constraints.add_point(point);
  return pair;
}

BaileyPair chain_step(const BaileyPair& pair, const std::string& s, const std::string& u) {
  require_step_names(s, u);
  const std::string& w = pair.point;
  const ParamMonomial& t = pair.t_expr;
  const ParamMonomial S = sym(s), U = sym(u);
  const std::string x = fresh_var(names_in(pair.beta, w));

  BaileyExpr alpha = BaileyExpr::product({ratio(t * U, t * S.pow(2) * U, w), pair.alpha});

  Factors prefactor{gamma_const(t.pow(2) * S.pow(2)), gamma_const(S.pow(2), Location::denominator),
                    gamma_const(t.pow(2), Location::denominator)};
  append(prefactor, gamma_pm(t.pow(2) * S * U, {w}));
  append(prefactor, gamma_pm(S * U, {w}, Location::denominator));

  Factors kernel = gamma_pm(S, {w, x});
  append(kernel, gamma_pm(U, {x}));
  append(kernel, gamma_pm2(x));
  append(kernel, gamma_pm(t.pow(2) * S.pow(2) * U, {x}, Location::denominator));

  BaileyExpr beta = BaileyExpr::product(
      {BaileyExpr::gamma_product(std::move(prefactor)),
       BaileyExpr::integral(
           x, BaileyExpr::product({BaileyExpr::gamma_product(std::move(kernel)), pair.beta.rename_free(w, x)}), 1)});

  BaileyPair out{std::move(alpha), std::move(beta), S * t, w, pair.constraints};
  add_step_constraints(out.constraints, t, S, U);
  out.constraints.add_param(s);
  out.constraints.add_param(u);
  return out;
}

BaileyPair dual_step(const BaileyPair& pair, const std::string& s, const std::string& u) {
  require_step_names(s, u);
  if (pair.t_expr.exponent(s) < 1) {
    throw Error(ErrorCode::shape, "dual step with '" + s + "' needs a pair whose parameter " +
                                      pair.t_expr.to_string() + " contains " + s);
  }
  const std::string& w = pair.point;
  const ParamMonomial S = sym(s), U = sym(u);
  const ParamMonomial t = pair.t_expr / S;
  const std::string x = fresh_var(names_in(pair.alpha, w));

  Factors prefactor{gamma_const(S.pow(2) * t.pow(2)), gamma_const(S.pow(2), Location::denominator),
                    gamma_const(t.pow(2), Location::denominator)};
  append(prefactor, gamma_pm(U, {w}));
  append(prefactor, gamma_pm2(w));
  append(prefactor, gamma_pm(t.pow(2) * S.pow(2) * U, {w}, Location::denominator));

  Factors kernel = gamma_pm(t.pow(2) * S * U, {x});
  append(kernel, gamma_pm(S, {w, x}));
  append(kernel, gamma_pm(S * U, {x}, Location::denominator));

  BaileyExpr alpha = BaileyExpr::product(
      {BaileyExpr::gamma_product(std::move(prefactor)),
       BaileyExpr::integral(
           x, BaileyExpr::product({BaileyExpr::gamma_product(std::move(kernel)), pair.alpha.rename_free(w, x)}), 1)});
  BaileyExpr beta = BaileyExpr::product({ratio(t * U, t * S.pow(2) * U, w), pair.beta});

  BaileyPair out{std::move(alpha), std::move(beta), t, w, pair.constraints};
  add_step_constraints(out.constraints, t, S, U);
  out.constraints.add_param(s);
  out.constraints.add_param(u);
  return out;
}

BaileyPair iterate_chain(const BaileyPair& pair, const std::vector<StepParams>& steps) {
  BaileyPair out = pair;
  for (const auto& st : steps) out = chain_step(out, st.s, st.u);
  return out;
}

BaileyPair iterate_dual(const BaileyPair& pair, const std::vector<StepParams>& steps) {
  BaileyPair out = pair;
  for (const auto& st : steps) out = dual_step(out, st.s, st.u);
  return out;
}

TreeWord TreeWord::parse(std::string_view text) {
  TreeWord word;
  const std::string compact = trim(text);
  std::size_t pos = 0;
  while (pos < compact.size()) {
    std::size_t end = compact.find(';', pos);
    if (end == std::string::npos) end = compact.size();
    const std::string item = compact.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) {
      if (end == compact.size()) break;
      throw Error(ErrorCode::parse, "empty letter in tree word '" + std::string(text) + "'");
    }
    const auto open = item.find('(');
    const auto comma = item.find(',');
    if (item.size() < 6 || (item[0] != 'C' && item[0] != 'D') || open != 1 || comma == std::string::npos ||
        item.back() != ')' || item.find(',', comma + 1) != std::string::npos) {
      throw Error(ErrorCode::parse, "malformed letter '" + item + "', expected C(s,u) or D(s,u)");
    }
    Step step{item[0] == 'C' ? Letter::chain : Letter::dual,
              {item.substr(2, comma - 2), item.substr(comma + 1, item.size() - comma - 2)}};
    if (step.params.s.empty() || step.params.u.empty() || step.params.s == step.params.u) {
      throw Error(ErrorCode::parse, "letter '" + item + "' needs two distinct parameter names");
    }
    word.steps.push_back(std::move(step));
  }
  return word;
}

std::string TreeWord::to_string() const {
  std::string out;
  for (const auto& st : steps) {
    if (!out.empty()) out += ';';
    out += (st.letter == Letter::chain ? "C(" : "D(") + st.params.s + "," + st.params.u + ")";
  }
  return out;
}

BaileyPair tree_pair(const TreeWord& word, const BaileyPair& seed) {
  BaileyPair out = seed;
  for (const auto& st : word.steps) {
    out = st.letter == TreeWord::Letter::chain ? chain_step(out, st.params.s, st.params.u)
                                               : dual_step(out, st.params.s, st.params.u);
  }
  return out;
}

BaileyPair seed_for_word(const TreeWord& word) {
  ParamMonomial extra;
  ParamMonomial running = sym("t");
  for (const auto& st : word.steps) {
    const ParamMonomial s = sym(st.params.s);
    if (st.letter == TreeWord::Letter::chain) {
      running *= s;
    } else if (running.exponent(st.params.s) >= 1) {
      running /= s;
    } else {
      extra *= s;
    }
  }
  return seed_pair("t0", "t1", "t2", sym("t") * extra);
}

BaileyExpr pair_transform(const BaileyPair& pair) {
  const std::string z = fresh_var(names_in(pair.alpha, pair.point));
  return BaileyExpr::integral(
      z,
      BaileyExpr::product({BaileyExpr::gamma_product(gamma_pm(pair.t_expr, {pair.point, z})),
                           pair.alpha.rename_free(pair.point, z)}),
      1);
}

ResidualReport pair_residual(const BaileyPair& pair, const Assignment& a, const BaseParams& base,
                             const QuadratureConfig& cfg, const ToleranceSpec& tol) {
  pair.constraints.check(a, base);
  const ExprValue beta = evaluate(pair.beta, a, base, cfg, tol);
  const ExprValue transform = evaluate(pair_transform(pair), a, base, cfg, tol);
  ResidualReport report{beta.value, transform.value, beta.value - transform.value,
                        beta.quadrature.converged && transform.quadrature.converged, beta.quadrature.nodes_used};
  report.nodes_used.insert(report.nodes_used.end(), transform.quadrature.nodes_used.begin(),
                           transform.quadrature.nodes_used.end());
  return report;
}

}  // namespace ellbailey
