// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/ellbailey.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ellbailey/bailey.hpp"
#include "ellbailey/error.hpp"
#include "ellbailey/verify.hpp"

using namespace ellbailey;

struct ellb_base {
  BaseParams value;
};

struct ellb_assignment {
  Assignment value;
};

struct ellb_report {
  VerificationReport value;
  double tol;
};

struct ellb_pair {
  BaileyPair value;
};

namespace {

thread_local std::string last_error;

Complex from_c(ellb_complex z) { return {z.re, z.im}; }
ellb_complex to_c(Complex z) { return {z.real(), z.imag()}; }

ellb_status fail(ellb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ellb_status guarded(F&& body) {
  try {
    body();
    return ELLB_OK;
  } catch (const Error& e) {
    return fail(static_cast<ellb_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ELLB_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(ELLB_INTERNAL_ERROR, e.what());
  }
}

ellb_status null_argument(const char* what) {
  return fail(ELLB_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::pair<double, double> range(double lo, double hi) { return {lo, hi}; }

}  // namespace

extern "C" {

const char* ellb_version(void) { return "0.1.0"; }

const char* ellb_status_name(ellb_status status) {
  switch (status) {
    case ELLB_OK:
      return "Ok";
    case ELLB_INVALID_ARGUMENT:
      return "InvalidArgument";
    case ELLB_INTERNAL_ERROR:
      return "InternalError";
    default:
      if (status >= ELLB_DOMAIN_ERROR && status <= ELLB_PARSE_ERROR) {
        return to_string(static_cast<ErrorCode>(static_cast<int>(status))).data();
      }
      return "UnknownStatus";
  }
}

const char* ellb_last_error(void) { return last_error.c_str(); }

void ellb_string_free(char* s) { std::free(s); }

ellb_status ellb_base_create(ellb_complex q, ellb_complex p, ellb_base** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new ellb_base{BaseParams(from_c(q), from_c(p))}; });
}

void ellb_base_destroy(ellb_base* base) { delete base; }

ellb_status ellb_gamma(const ellb_base* base, ellb_complex z, ellb_complex* out) {
  if (base == nullptr || out == nullptr) return null_argument("base and out");
  return guarded([&] { *out = to_c(elliptic_gamma(from_c(z), base->value)); });
}

ellb_status ellb_pochhammer(ellb_complex a, ellb_complex q, ellb_complex* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = to_c(qpochhammer_infinite(from_c(a), from_c(q))); });
}

ellb_status ellb_beta_closed_form(const ellb_base* base, const ellb_complex t[5], ellb_complex* out) {
  if (base == nullptr || t == nullptr || out == nullptr) return null_argument("base, t and out");
  return guarded([&] {
    Assignment a;
    for (int m = 0; m < 5; ++m) a.params["t" + std::to_string(m)] = from_c(t[m]);
    const IdentitySides sides = beta_integral_sides();
    sides.constraints.check(a, base->value);
    *out = to_c(evaluate(sides.rhs, a, base->value, 1e-10).value);
  });
}

ellb_status ellb_assignment_create(ellb_assignment** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new ellb_assignment{}; });
}

void ellb_assignment_destroy(ellb_assignment* a) { delete a; }

ellb_status ellb_assignment_set_param(ellb_assignment* a, const char* name, ellb_complex value) {
  if (a == nullptr || name == nullptr) return null_argument("assignment and name");
  return guarded([&] { a->value.params[name] = from_c(value); });
}

ellb_status ellb_assignment_set_point(ellb_assignment* a, const char* name, ellb_complex value) {
  if (a == nullptr || name == nullptr) return null_argument("assignment and name");
  return guarded([&] { a->value.vars[name] = from_c(value); });
}

ellb_status ellb_assignment_json(const ellb_assignment* a, char** out) {
  if (a == nullptr || out == nullptr) return null_argument("assignment and out");
  return guarded([&] {
    VerificationReport carrier;
    carrier.assignment = a->value;
    *out = copy_string(to_json(carrier)["assignment"].dump());
  });
}

ellb_status ellb_identity_sample(const char* identity_id, const ellb_base* base, uint64_t seed, double modulus_lo,
                                 double modulus_hi, ellb_assignment** out) {
  if (identity_id == nullptr || base == nullptr || out == nullptr) return null_argument("identity, base and out");
  return guarded([&] {
    const IdentitySides sides = identity_sides(identity_id);
    *out = new ellb_assignment{sample_params(sides.constraints, base->value, seed, range(modulus_lo, modulus_hi))};
  });
}

ellb_status ellb_identity_params(const char* identity_id, char** out) {
  if (identity_id == nullptr || out == nullptr) return null_argument("identity and out");
  return guarded([&] {
    const IdentitySides sides = identity_sides(identity_id);
    *out = copy_string(nlohmann::json(sides.constraints.params).dump());
  });
}

ellb_status ellb_verify(const char* identity_id, const ellb_assignment* a, const ellb_base* base,
                        const ellb_verify_options* opts, ellb_report** out) {
  if (identity_id == nullptr || a == nullptr || base == nullptr || out == nullptr) {
    return null_argument("identity, assignment, base and out");
  }
  return guarded([&] {
    VerifyOptions o;
    if (opts != nullptr) {
      if (opts->tol < 0.0 || opts->n_max < 0) throw Error(ErrorCode::domain, "tolerance and n_max must be >= 0");
      o.tol = opts->tol;
      o.n_max = opts->n_max;
      o.method = opts->naive ? GridMethod::naive : GridMethod::table;
    }
    const IdentitySides sides = identity_sides(identity_id);
    const double tol = o.tol > 0.0 ? o.tol : default_identity_tol(identity_dims(sides));
    *out = new ellb_report{verify(sides, a->value, base->value, o), tol};
  });
}

ellb_status ellb_report_info_get(const ellb_report* r, ellb_report_info* out) {
  if (r == nullptr || out == nullptr) return null_argument("report and out");
  const auto& v = r->value;
  *out = {to_c(v.lhs), to_c(v.rhs), v.abs_err, v.rel_err, v.runtime_ms, v.converged ? 1 : 0, r->tol};
  return ELLB_OK;
}

ellb_status ellb_report_json(const ellb_report* r, char** out) {
  if (r == nullptr || out == nullptr) return null_argument("report and out");
  return guarded([&] { *out = copy_string(to_json(r->value).dump()); });
}

void ellb_report_destroy(ellb_report* r) { delete r; }

ellb_status ellb_tree_pair(const char* word, ellb_pair** out) {
  if (word == nullptr || out == nullptr) return null_argument("word and out");
  return guarded([&] {
    const TreeWord w = TreeWord::parse(word);
    *out = new ellb_pair{tree_pair(w, seed_for_word(w))};
  });
}

void ellb_pair_destroy(ellb_pair* pair) { delete pair; }

ellb_status ellb_pair_json(const ellb_pair* pair, char** out) {
  if (pair == nullptr || out == nullptr) return null_argument("pair and out");
  return guarded([&] { *out = copy_string(to_json(pair->value).dump()); });
}

ellb_status ellb_pair_sample(const ellb_pair* pair, const ellb_base* base, uint64_t seed, double modulus_lo,
                             double modulus_hi, ellb_assignment** out) {
  if (pair == nullptr || base == nullptr || out == nullptr) return null_argument("pair, base and out");
  return guarded([&] {
    *out = new ellb_assignment{
        sample_params(pair->value.constraints, base->value, seed, range(modulus_lo, modulus_hi))};
  });
}

ellb_status ellb_pair_residual(const ellb_pair* pair, const ellb_assignment* a, const ellb_base* base, double target,
                               int n_max, ellb_residual* out) {
  if (pair == nullptr || a == nullptr || base == nullptr || out == nullptr) {
    return null_argument("pair, assignment, base and out");
  }
  return guarded([&] {
    if (!(target > 0.0 && target < 1.0) || n_max < 0) throw Error(ErrorCode::domain, "bad target or n_max");
    const auto& p = pair->value;
    p.constraints.check(a->value, base->value);
    auto config = [&](const BaileyExpr& e) {
      QuadratureConfig cfg = QuadratureConfig::defaults_for(static_cast<int>(e.bound_vars().size()), target);
      if (n_max > 0) {
        cfg.n_max = n_max;
        cfg.n_start = std::min(cfg.n_start, n_max);
      }
      return cfg;
    };
    const BaileyExpr transform = pair_transform(p);
    const ExprValue beta = evaluate(p.beta, a->value, base->value, config(p.beta));
    const ExprValue rhs = evaluate(transform, a->value, base->value, config(transform));
    const double scale = std::max({std::abs(beta.value), std::abs(rhs.value), 1e-300});
    *out = {to_c(beta.value), to_c(rhs.value), std::abs(beta.value - rhs.value) / scale,
            beta.quadrature.converged && rhs.quadrature.converged ? 1 : 0};
  });
}

}  // extern "C"
