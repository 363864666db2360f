// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "ellbailey/error.hpp"

namespace ellbailey {

namespace {

Complex ipow(Complex x, int n) {
  Complex result(1.0, 0.0);
  Complex base = n < 0 ? 1.0 / x : x;
  unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
  while (m != 0) {
    if (m & 1u) result *= base;
    base *= base;
    m >>= 1;
  }
  return result;
}

std::string exponent_suffix(int e) { return e == 1 ? std::string() : "^" + std::to_string(e); }

auto scale_key(Complex c) { return std::make_tuple(c.real(), c.imag()); }

}  // namespace

// ---------------------------------------------------------------- ParamMonomial

ParamMonomial ParamMonomial::symbol(std::string name, int exponent) {
  ParamMonomial m;
  if (exponent != 0) m.exponents_.emplace(std::move(name), exponent);
  return m;
}

int ParamMonomial::exponent(std::string_view name) const {
  auto it = exponents_.find(name);
  return it == exponents_.end() ? 0 : it->second;
}

ParamMonomial ParamMonomial::pow(int n) const {
  ParamMonomial out;
  if (n == 0) return out;
  out.scale_ = ipow(scale_, n);
  for (const auto& [name, e] : exponents_) out.exponents_.emplace(name, e * n);
  return out;
}

ParamMonomial& ParamMonomial::operator*=(const ParamMonomial& other) {
  scale_ *= other.scale_;
  for (const auto& [name, e] : other.exponents_) {
    auto [it, inserted] = exponents_.try_emplace(name, e);
    if (!inserted) {
      it->second += e;
      if (it->second == 0) exponents_.erase(it);
    }
  }
  return *this;
}

Complex ParamMonomial::evaluate(const ParamValues& values) const {
  Complex result = scale_;
  for (const auto& [name, e] : exponents_) {
    auto it = values.find(name);
    if (it == values.end()) {
      throw Error(ErrorCode::unknown_symbol, "parameter '" + name + "' has no value");
    }
    result *= ipow(it->second, e);
  }
  return result;
}

std::string ParamMonomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (scale_ != Complex(1.0, 0.0) || exponents_.empty()) {
    if (scale_.imag() == 0.0) {
      os << scale_.real();
    } else {
      os << "(" << scale_.real() << (scale_.imag() < 0 ? "" : "+") << scale_.imag() << "i)";
    }
    first = false;
  }
  for (const auto& [name, e] : exponents_) {
    if (!first) os << '*';
    os << name << exponent_suffix(e);
    first = false;
  }
  return os.str();
}

bool operator<(const ParamMonomial& a, const ParamMonomial& b) {
  if (a.exponents() != b.exponents()) return a.exponents() < b.exponents();
  return scale_key(a.scale()) < scale_key(b.scale());
}

// ---------------------------------------------------------------- GammaFactor

std::string GammaFactor::to_string() const {
  std::string arg = coeff.is_unit() && !vars.empty() ? std::string() : coeff.to_string();
  for (const auto& [v, e] : vars) {
    if (!arg.empty()) arg += '*';
    arg += v + exponent_suffix(e);
  }
  return std::string(loc == Location::numerator ? "" : "1/") + "G(" + arg + ")";
}

bool operator<(const GammaFactor& a, const GammaFactor& b) {
  if (a.loc != b.loc) return a.loc < b.loc;
  if (a.coeff != b.coeff) return a.coeff < b.coeff;
  return a.vars < b.vars;
}

std::vector<GammaFactor> gamma_pm(const ParamMonomial& coeff, const VarExponents& fixed,
                                  const std::vector<std::pair<std::string, int>>& pm_vars, Location loc) {
  std::vector<GammaFactor> out;
  const std::size_t combos = std::size_t{1} << pm_vars.size();
  out.reserve(combos);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    GammaFactor f{coeff, fixed, loc};
    for (std::size_t i = 0; i < pm_vars.size(); ++i) {
      const auto& [name, magnitude] = pm_vars[i];
      const int e = (mask >> i) & 1u ? -magnitude : magnitude;
      auto [it, inserted] = f.vars.try_emplace(name, e);
      if (!inserted) {
        it->second += e;
        if (it->second == 0) f.vars.erase(it);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<GammaFactor> gamma_pm(const ParamMonomial& coeff, const std::vector<std::string>& pm_vars,
                                  Location loc) {
  std::vector<std::pair<std::string, int>> signs;
  signs.reserve(pm_vars.size());
  for (const auto& v : pm_vars) signs.emplace_back(v, 1);
  return gamma_pm(coeff, {}, signs, loc);
}

std::vector<GammaFactor> gamma_pm2(const std::string& var, Location loc) {
  return gamma_pm(ParamMonomial{}, {}, {{var, 2}}, loc);
}

GammaFactor gamma_const(const ParamMonomial& coeff, Location loc) { return GammaFactor{coeff, {}, loc}; }

std::vector<GammaFactor> expand_pm(std::string_view descriptor, const SymbolTable& symbols, Location loc) {
  struct PmItem {
    std::string name;
    int magnitude;
    bool is_param;
  };
  ParamMonomial coeff;
  VarExponents fixed;
  std::vector<PmItem> pm_items;

  std::string text(descriptor);
  std::replace(text.begin(), text.end(), '*', ' ');
  std::istringstream tokens(text);
  std::string token;
  while (tokens >> token) {
    double number = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
    if (ec == std::errc() && ptr == token.data() + token.size()) {
      coeff *= ParamMonomial(Complex(number, 0.0));
      continue;
    }
    std::string name = token;
    std::string suffix;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      suffix = token.substr(caret + 1);
    }
    const bool is_param = symbols.params.count(name) != 0;
    if (!is_param && symbols.vars.count(name) == 0) {
      throw Error(ErrorCode::unknown_symbol, "undeclared symbol '" + name + "' in '" + std::string(descriptor) + "'");
    }
    bool pm = false;
    for (std::string_view marker : {"±", "pm"}) {
      if (suffix.rfind(marker, 0) == 0) {
        pm = true;
        suffix.erase(0, marker.size());
        break;
      }
    }
    int magnitude = 1;
    if (!suffix.empty()) {
      auto [p, err] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), magnitude);
      if (err != std::errc() || p != suffix.data() + suffix.size()) {
        throw Error(ErrorCode::parse, "bad exponent in '" + token + "'");
      }
    }
    if (pm) {
      pm_items.push_back({name, magnitude, is_param});
    } else if (is_param) {
      coeff *= ParamMonomial::symbol(name, magnitude);
    } else if (magnitude != 0) {
      fixed[name] += magnitude;
      if (fixed[name] == 0) fixed.erase(name);
    }
  }

  std::vector<std::pair<std::string, int>> var_items;
  std::vector<PmItem> param_items;
  for (auto& item : pm_items) {
    if (item.is_param) {
      param_items.push_back(item);
    } else {
      var_items.emplace_back(item.name, item.magnitude);
    }
  }
  std::vector<GammaFactor> out;
  const std::size_t param_combos = std::size_t{1} << param_items.size();
  for (std::size_t mask = 0; mask < param_combos; ++mask) {
    ParamMonomial c = coeff;
    for (std::size_t i = 0; i < param_items.size(); ++i) {
      const int e = (mask >> i) & 1u ? -param_items[i].magnitude : param_items[i].magnitude;
      c *= ParamMonomial::symbol(param_items[i].name, e);
    }
    auto part = gamma_pm(c, fixed, var_items, loc);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Complex factor_argument(const GammaFactor& factor, const Assignment& a) {
  Complex arg = factor.coeff.evaluate(a.params);
  for (const auto& [name, e] : factor.vars) {
    auto it = a.vars.find(name);
    if (it == a.vars.end()) {
      throw Error(ErrorCode::unknown_symbol, "variable '" + name + "' has no value");
    }
    arg *= ipow(it->second, e);
  }
  return arg;
}

Complex evaluate(const std::vector<GammaFactor>& factors, const Assignment& a, const BaseParams& base,
                 const ToleranceSpec& tol) {
  Complex result(1.0, 0.0);
  for (const auto& f : factors) {
    const Complex arg = factor_argument(f, a);
    try {
      result *= f.loc == Location::numerator ? elliptic_gamma(arg, base, tol)
                                             : reciprocal_elliptic_gamma(arg, base, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::pole) throw;
      throw Error(ErrorCode::pole, "factor " + f.to_string() + ": " + e.what());
    }
  }
  return result;
}

Complex evaluate(const Integrand& intg, const Assignment& a, const BaseParams& base, const ToleranceSpec& tol) {
  return evaluate(intg.factors, a, base, tol);
}

double pole_margin(const Integrand& intg, const Assignment& a, const BaseParams& base, std::string_view var,
                   const ToleranceSpec& tol) {
  const double abs_q = std::abs(base.q());
  const double abs_p = std::abs(base.p());
  const int depth_q = abs_q == 0.0 ? 1 : lattice_depth(abs_q, tol);
  const int depth_p = abs_p == 0.0 ? 1 : lattice_depth(abs_p, tol);
  const double log_q = abs_q == 0.0 ? 0.0 : -std::log(abs_q);
  const double log_p = abs_p == 0.0 ? 0.0 : -std::log(abs_p);
  const bool has_zeros = abs_q > 0.0 && abs_p > 0.0;

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& f : intg.factors) {
    auto it = f.vars.find(var);
    if (it == f.vars.end()) continue;
    const int e = it->second;
    Complex c = f.coeff.evaluate(a.params);
    for (const auto& [name, ve] : f.vars) {
      if (name == var) continue;
      auto vit = a.vars.find(name);
      if (vit == a.vars.end()) {
        throw Error(ErrorCode::unknown_symbol, "variable '" + name + "' has no value");
      }
      c *= ipow(vit->second, ve);
    }
    const double log_c = std::log(std::abs(c));
    for (int j = 0; j < depth_q; ++j) {
      if (abs_q == 0.0 && j > 0) break;
      for (int k = 0; k < depth_p; ++k) {
        if (abs_p == 0.0 && k > 0) break;
        double log_r;
        if (f.loc == Location::numerator) {
          // c v^e = q^{-j} p^{-k}
          log_r = (j * log_q + k * log_p - log_c) / e;
        } else {
          if (!has_zeros) break;
          // c v^e = q^{j+1} p^{k+1}
          log_r = (-(j + 1) * log_q - (k + 1) * log_p - log_c) / e;
        }
        margin = std::min(margin, std::abs(std::exp(log_r) - 1.0));
      }
    }
  }
  if (margin <= 1e-13) {
    throw Error(ErrorCode::degenerate, "integrand has a pole on the unit circle in '" + std::string(var) + "'");
  }
  return margin;
}

std::vector<GammaFactor> normalized(std::vector<GammaFactor> factors) {
  std::map<std::pair<ParamMonomial, VarExponents>, int> balance;
  for (const auto& f : factors) {
    balance[{f.coeff, f.vars}] += f.loc == Location::numerator ? 1 : -1;
  }
  std::vector<GammaFactor> out;
  for (const auto& [key, count] : balance) {
    const Location loc = count > 0 ? Location::numerator : Location::denominator;
    for (int i = 0; i < std::abs(count); ++i) out.push_back(GammaFactor{key.first, key.second, loc});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const ParamMonomial& m) {
  nlohmann::json coeff = nlohmann::json::object();
  for (const auto& [name, e] : m.exponents()) coeff[name] = e;
  return {{"coeff", coeff}, {"scale", {m.scale().real(), m.scale().imag()}}};
}

ParamMonomial monomial_from_json(const nlohmann::json& j) {
  try {
    ParamMonomial m;
    if (j.contains("scale")) {
      const auto& s = j.at("scale");
      m = ParamMonomial(Complex(s.at(0).get<double>(), s.at(1).get<double>()));
    }
    for (const auto& [name, e] : j.at("coeff").items()) m *= ParamMonomial::symbol(name, e.get<int>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed monomial: ") + e.what());
  }
}

nlohmann::json to_json(const GammaFactor& f) {
  nlohmann::json j = to_json(f.coeff);
  nlohmann::json vars = nlohmann::json::object();
  for (const auto& [name, e] : f.vars) vars[name] = e;
  j["vars"] = vars;
  j["loc"] = f.loc == Location::numerator ? "num" : "den";
  return j;
}

GammaFactor factor_from_json(const nlohmann::json& j) {
  try {
    GammaFactor f;
    f.coeff = monomial_from_json(j);
    for (const auto& [name, e] : j.at("vars").items()) {
      if (e.get<int>() != 0) f.vars[name] = e.get<int>();
    }
    const auto loc = j.at("loc").get<std::string>();
    if (loc != "num" && loc != "den") throw Error(ErrorCode::parse, "factor loc must be \"num\" or \"den\"");
    f.loc = loc == "num" ? Location::numerator : Location::denominator;
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed gamma factor: ") + e.what());
  }
}

nlohmann::json to_json(const Integrand& intg) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : intg.factors) factors.push_back(to_json(f));
  return {{"contour_vars", intg.contour_vars}, {"factors", factors}};
}

Integrand integrand_from_json(const nlohmann::json& j) {
  try {
    Integrand intg;
    intg.contour_vars = j.at("contour_vars").get<std::vector<std::string>>();
    for (const auto& f : j.at("factors")) intg.factors.push_back(factor_from_json(f));
    return intg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed integrand: ") + e.what());
  }
}

}  // namespace ellbailey
