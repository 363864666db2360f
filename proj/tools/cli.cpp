// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ellbailey/ellbailey.h"
#include "json.hpp"

namespace ellbailey::cli {

namespace {

using Complex = std::complex<double>;
using nlohmann::json;

// A failed library call, carrying the status for the exit code.
struct LibraryFailure : std::runtime_error {
  ellb_status status;
  LibraryFailure(ellb_status s, const std::string& message) : std::runtime_error(message), status(s) {}
};

// Malformed user input detected by the front end itself.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ellb_status status) {
  if (status != ELLB_OK) throw LibraryFailure(status, ellb_last_error());
}

struct BaseDeleter {
  void operator()(ellb_base* b) const { ellb_base_destroy(b); }
};
struct AssignmentDeleter {
  void operator()(ellb_assignment* a) const { ellb_assignment_destroy(a); }
};
struct ReportDeleter {
  void operator()(ellb_report* r) const { ellb_report_destroy(r); }
};
struct PairDeleter {
  void operator()(ellb_pair* p) const { ellb_pair_destroy(p); }
};
using BasePtr = std::unique_ptr<ellb_base, BaseDeleter>;
using AssignmentPtr = std::unique_ptr<ellb_assignment, AssignmentDeleter>;
using ReportPtr = std::unique_ptr<ellb_report, ReportDeleter>;
using PairPtr = std::unique_ptr<ellb_pair, PairDeleter>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out(s);
  ellb_string_free(s);
  return out;
}

ellb_complex to_c(Complex z) { return {z.real(), z.imag()}; }
Complex from_c(ellb_complex z) { return {z.re, z.im}; }
json pair_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string show(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.16g%+.16gi", z.real(), z.imag());
  return buf;
}

std::string show(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

// Raw flag values, before the config file is merged in.
struct Flags {
  std::string q, p, z, w, t, s, u, word, config, identity;
  int m = 0;
  std::uint64_t seed = 1;
  double tol = 0.0;
  int n_max = 0;
  bool json_out = false;
};

// Resolved settings.
struct RunConfig {
  std::string command;
  std::optional<Complex> q, p, z, w;
  std::optional<std::vector<Complex>> t, s, u;
  std::optional<int> m;
  std::string word;
  std::string identity;
  std::uint64_t seed = 1;
  double tol = 0.0;
  int n_max = 0;
  bool json_out = false;
};

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("complex value must be a number, \"a+bi\" or [re, im]");
}

std::vector<Complex> list_from_json(const json& j) {
  if (j.is_string()) return parse_complex_list(j.get<std::string>());
  if (!j.is_array()) throw std::invalid_argument("list value must be an array or a comma-separated string");
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

// Merges flags and the optional JSON config. A setting given both ways is an error.
RunConfig resolve(const std::string& command, const Flags& f, const CLI::App& sub) {
  RunConfig rc;
  rc.command = command;
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (given("--q")) rc.q = parse_complex(f.q);
  if (given("--p")) rc.p = parse_complex(f.p);
  if (given("--z")) rc.z = parse_complex(f.z);
  if (given("--w")) rc.w = parse_complex(f.w);
  if (given("--t")) rc.t = parse_complex_list(f.t);
  if (given("--s")) rc.s = parse_complex_list(f.s);
  if (given("--u")) rc.u = parse_complex_list(f.u);
  if (given("--m")) rc.m = f.m;
  rc.word = f.word;
  rc.identity = f.identity;
  rc.seed = f.seed;
  rc.tol = f.tol;
  rc.n_max = f.n_max;
  rc.json_out = f.json_out;
  if (f.config.empty()) return rc;

  std::ifstream in(f.config);
  if (!in) throw UsageFailure("cannot read config file '" + f.config + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageFailure("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageFailure("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + (key == "n_max" ? std::string("n-max") : key);
    if (key == "identity") {
      if (!rc.identity.empty()) throw UsageFailure("identity given both on the command line and in the config");
      rc.identity = value.get<std::string>();
      continue;
    }
    if (!sub.get_option_no_throw(flag)) throw UsageFailure("config key '" + key + "' is not a flag of " + command);
    if (given(flag.c_str())) throw UsageFailure("'" + key + "' given both on the command line and in the config");
    try {
      if (key == "q") rc.q = complex_from_json(value);
      else if (key == "p") rc.p = complex_from_json(value);
      else if (key == "z") rc.z = complex_from_json(value);
      else if (key == "w") rc.w = complex_from_json(value);
      else if (key == "t") rc.t = list_from_json(value);
      else if (key == "s") rc.s = list_from_json(value);
      else if (key == "u") rc.u = list_from_json(value);
      else if (key == "m") rc.m = value.get<int>();
      else if (key == "word") rc.word = value.get<std::string>();
      else if (key == "seed") rc.seed = value.get<std::uint64_t>();
      else if (key == "tol") rc.tol = value.get<double>();
      else if (key == "n_max" || key == "n-max") rc.n_max = value.get<int>();
      else if (key == "json") rc.json_out = value.get<bool>();
      else throw UsageFailure("config key '" + key + "' is not supported");
    } catch (const json::exception& e) {
      throw UsageFailure("config key '" + key + "': " + e.what());
    }
  }
  return rc;
}

template <typename T>
const T& require(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageFailure(std::string(flag) + " is required");
  return *v;
}

BasePtr make_base(const RunConfig& rc) {
  ellb_base* b = nullptr;
  check(ellb_base_create(to_c(require(rc.q, "--q")), to_c(require(rc.p, "--p")), &b));
  return BasePtr(b);
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

int cmd_gamma(const RunConfig& rc, std::ostream& out) {
  auto base = make_base(rc);
  const Complex z = require(rc.z, "--z");
  ellb_complex v;
  check(ellb_gamma(base.get(), to_c(z), &v));
  if (rc.json_out) {
    emit(out, {{"command", "gamma"}, {"q", pair_json(*rc.q)}, {"p", pair_json(*rc.p)}, {"z", pair_json(z)},
               {"value", pair_json(from_c(v))}});
  } else {
    out << "Gamma(" << show(z) << "; q, p) = " << show(from_c(v)) << '\n';
  }
  return kExitOk;
}

int cmd_pochhammer(const RunConfig& rc, std::ostream& out) {
  const Complex a = require(rc.z, "--z");
  const Complex q = require(rc.q, "--q");
  ellb_complex v;
  check(ellb_pochhammer(to_c(a), to_c(q), &v));
  if (rc.json_out) {
    emit(out, {{"command", "pochhammer"}, {"a", pair_json(a)}, {"q", pair_json(q)}, {"value", pair_json(from_c(v))}});
  } else {
    out << "(" << show(a) << "; q)_inf = " << show(from_c(v)) << '\n';
  }
  return kExitOk;
}

int cmd_beta(const RunConfig& rc, std::ostream& out) {
  auto base = make_base(rc);
  const auto& t = require(rc.t, "--t");
  if (t.size() != 5) throw UsageFailure("beta needs five values in --t");
  ellb_complex tc[5];
  for (int i = 0; i < 5; ++i) tc[i] = to_c(t[static_cast<std::size_t>(i)]);
  ellb_complex v;
  check(ellb_beta_closed_form(base.get(), tc, &v));
  if (rc.json_out) {
    json ts = json::array();
    for (const auto& x : t) ts.push_back(pair_json(x));
    emit(out, {{"command", "beta"}, {"t", ts}, {"value", pair_json(from_c(v))}});
  } else {
    out << "prod Gamma(t_m t_s) / prod Gamma(A/t_m) = " << show(from_c(v)) << '\n';
  }
  return kExitOk;
}

std::string identity_id(const RunConfig& rc) {
  std::string id = rc.identity;
  if (id.empty()) throw UsageFailure("verify needs an identity: beta, transformation, id-seq, ident1, identfin");
  const bool leveled = id.starts_with("id-seq") || id.starts_with("identfin");
  if (leveled && id.find(':') == std::string::npos) {
    id += ":" + std::to_string(rc.m.value_or(1));
  } else if (rc.m && (!leveled || id.substr(id.find(':') + 1) != std::to_string(*rc.m))) {
    throw UsageFailure("--m conflicts with identity '" + id + "'");
  }
  return id;
}

struct Slot {
  const std::optional<std::vector<Complex>>* values;
  const char* flag;
  std::vector<std::string> names;
};

// Builds the assignment from --t/--s/--u/--w according to the identity's
// parameter layout, or returns null when none of them is given.
AssignmentPtr assignment_from_flags(const RunConfig& rc, const std::string& id) {
  const bool any = rc.t || rc.s || rc.u || rc.w;
  if (!any) return nullptr;
  auto seq = [](const char* prefix, int from, int to) {
    std::vector<std::string> out;
    for (int k = from; k <= to; ++k) out.push_back(prefix + std::to_string(k));
    return out;
  };
  std::vector<Slot> slots;
  bool needs_w = true;
  if (id == "beta") {
    slots = {{&rc.t, "--t", seq("t", 0, 4)}};
    needs_w = false;
  } else if (id == "transformation") {
    slots = {{&rc.t, "--t", {"t1", "t2", "t3", "t"}}, {&rc.s, "--s", seq("s", 1, 3)}};
    needs_w = false;
  } else {
    const int level = id == "ident1" ? 2 : std::stoi(id.substr(id.find(':') + 1)) + (id.starts_with("identfin") ? 1 : 0);
    slots = {{&rc.t, "--t", {"t0", "t1", "t2", "t"}}, {&rc.s, "--s", seq("s", 1, level)},
             {&rc.u, "--u", seq("u", 1, level)}};
  }
  ellb_assignment* raw = nullptr;
  check(ellb_assignment_create(&raw));
  AssignmentPtr a(raw);
  for (const auto& slot : slots) {
    const auto& v = *slot.values;
    if (!v || v->size() != slot.names.size()) {
      throw UsageFailure(id + " needs " + std::to_string(slot.names.size()) + " values in " + slot.flag);
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      check(ellb_assignment_set_param(a.get(), slot.names[i].c_str(), to_c((*v)[i])));
    }
  }
  if (needs_w) {
    check(ellb_assignment_set_point(a.get(), "w", to_c(require(rc.w, "--w"))));
  } else if (rc.w) {
    throw UsageFailure(id + " takes no --w");
  }
  if (!needs_w && (rc.u || (id == "beta" && rc.s))) throw UsageFailure(id + " takes no such list");
  return a;
}

json error_record(const std::string& command, const std::string& id, ellb_status status, const std::string& msg) {
  json j{{"command", command}, {"error", ellb_status_name(status)}, {"message", msg}};
  if (!id.empty()) j["identity_id"] = id;
  return j;
}

int cmd_verify(const RunConfig& rc, std::ostream& out) {
  const std::string id = identity_id(rc);
  auto base = make_base(rc);
  AssignmentPtr a = assignment_from_flags(rc, id);
  if (!a) {
    ellb_assignment* raw = nullptr;
    check(ellb_identity_sample(id.c_str(), base.get(), rc.seed, 0.4, 0.8, &raw));
    a.reset(raw);
  }
  ellb_verify_options opts{rc.tol, rc.n_max, 0};
  ellb_report* raw = nullptr;
  const ellb_status st = ellb_verify(id.c_str(), a.get(), base.get(), &opts, &raw);
  if (st == ELLB_CONSTRAINT_VIOLATION) {
    const std::string msg = ellb_last_error();
    if (rc.json_out) {
      json rec = error_record("verify", id, st, msg);
      rec["assignment"] = json::parse(take([&] {
        char* s = nullptr;
        check(ellb_assignment_json(a.get(), &s));
        return s;
      }()));
      emit(out, rec);
    } else {
      out << "identity   " << id << "\nresult     FAIL (" << msg << ")\n";
    }
    return kExitFailed;
  }
  check(st);
  ReportPtr report(raw);
  ellb_report_info info;
  check(ellb_report_info_get(report.get(), &info));
  char* text = nullptr;
  check(ellb_report_json(report.get(), &text));
  const std::string dumped = take(text);
  const bool passed = info.converged && info.rel_err <= info.tol;
  if (rc.json_out) {
    out << dumped << '\n';
  } else {
    const json j = json::parse(dumped);
    out << "identity   " << id << '\n';
    for (const auto& [name, v] : j["assignment"]["params"].items()) {
      out << "  " << name << " = " << show(Complex(v[0].get<double>(), v[1].get<double>())) << '\n';
    }
    for (const auto& [name, v] : j["assignment"]["points"].items()) {
      out << "  " << name << " = " << show(Complex(v[0].get<double>(), v[1].get<double>())) << '\n';
    }
    out << "lhs        " << show(from_c(info.lhs)) << '\n'
        << "rhs        " << show(from_c(info.rhs)) << '\n'
        << "abs_err    " << show(info.abs_err) << '\n'
        << "rel_err    " << show(info.rel_err) << " (tol " << show(info.tol) << ")\n"
        << "nodes_used " << j["nodes_used"].dump() << '\n'
        << "converged  " << (info.converged ? "yes" : "no") << '\n'
        << "runtime_ms " << show(info.runtime_ms) << '\n'
        << "result     " << (passed ? "PASS" : "FAIL") << '\n';
  }
  return passed ? kExitOk : kExitFailed;
}

// "s2*t" from the serialized monomial; a non-unit scale is prefixed.
std::string show_monomial(const json& m) {
  std::string text;
  const Complex scale = complex_from_json(m.at("scale"));
  if (scale != Complex(1.0, 0.0)) text = show(scale);
  for (const auto& [name, e] : m.at("coeff").items()) {
    if (!text.empty()) text += '*';
    text += name;
    if (e.get<int>() != 1) text += '^' + std::to_string(e.get<int>());
  }
  return text.empty() ? "1" : text;
}

int cmd_tree(const RunConfig& rc, std::ostream& out) {
  if (rc.word.empty()) throw UsageFailure("tree needs --word, e.g. \"C(s1,u1);D(s2,u2)\"");
  auto base = make_base(rc);
  ellb_pair* raw_pair = nullptr;
  check(ellb_tree_pair(rc.word.c_str(), &raw_pair));
  PairPtr pair(raw_pair);
  ellb_assignment* raw = nullptr;
  check(ellb_pair_sample(pair.get(), base.get(), rc.seed, 0.4, 0.8, &raw));
  AssignmentPtr a(raw);
  const double tol = rc.tol > 0.0 ? rc.tol : 1e-6;
  ellb_residual res;
  check(ellb_pair_residual(pair.get(), a.get(), base.get(), std::min(tol / 100.0, 1e-3), rc.n_max, &res));
  char* s = nullptr;
  check(ellb_pair_json(pair.get(), &s));
  const json pj = json::parse(take(s));
  check(ellb_assignment_json(a.get(), &s));
  const json aj = json::parse(take(s));
  const bool passed = res.converged && res.relative <= tol;
  if (rc.json_out) {
    emit(out, {{"command", "tree"},
               {"word", rc.word},
               {"pair", pj},
               {"assignment", aj},
               {"beta", pair_json(from_c(res.beta))},
               {"transform", pair_json(from_c(res.transform))},
               {"rel_residual", res.relative},
               {"converged", res.converged != 0}});
  } else {
    out << "word         " << rc.word << '\n'
        << "pairing      " << show_monomial(pj.at("t_expr")) << '\n'
        << "beta         " << show(from_c(res.beta)) << '\n'
        << "transform    " << show(from_c(res.transform)) << '\n'
        << "rel_residual " << show(res.relative) << " (tol " << show(tol) << ")\n"
        << "converged    " << (res.converged ? "yes" : "no") << '\n'
        << "result       " << (passed ? "PASS" : "FAIL") << '\n';
  }
  return passed ? kExitOk : kExitFailed;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--q", f.q, "base q (complex, \"a+bi\")");
  sub->add_option("--p", f.p, "base p (complex)");
  sub->add_option("--z", f.z, "argument (complex)");
  sub->add_option("--w", f.w, "external point on the unit circle");
  sub->add_option("--t", f.t, "comma-separated t parameters");
  sub->add_option("--s", f.s, "comma-separated s parameters");
  sub->add_option("--u", f.u, "comma-separated u parameters");
  sub->add_option("--m", f.m, "iteration depth of id-seq / identfin");
  sub->add_option("--word", f.word, "lemma word such as \"C(s1,u1);D(s2,u2)\"");
  sub->add_option("--seed", f.seed, "seed of the parameter sampler");
  sub->add_option("--tol", f.tol, "agreement tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--n-max", f.n_max, "grid cap per dimension (power of two)")->check(CLI::PositiveNumber);
  sub->add_flag("--json", f.json_out, "print JSON");
  sub->add_option("--config", f.config, "JSON file with further settings");
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty complex value");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s), 0.0};
  s.pop_back();
  // The split is the last sign that does not belong to an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag = [](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part);
  };
  if (split == std::string::npos) return {0.0, imag(s)};
  return {parse_real(s.substr(0, split)), imag(s.substr(split))};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = text.find(',', pos);
    out.push_back(parse_complex(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos)));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic gamma function, torus quadrature and integral Bailey pair certificates", "ellbailey"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* gamma = app.add_subcommand("gamma", "evaluate the elliptic gamma function at --z");
  CLI::App* poch = app.add_subcommand("pochhammer", "evaluate (a;q) with a = --z");
  CLI::App* beta = app.add_subcommand("beta", "closed form of the elliptic beta integral for five --t");
  CLI::App* verify = app.add_subcommand("verify", "certify an identity numerically");
  CLI::App* tree = app.add_subcommand("tree", "build a pair from a lemma word and check its pair relation");
  for (auto* sub : {gamma, poch, beta, verify, tree}) add_common(sub, f);
  verify->add_option("identity", f.identity, "beta | transformation | id-seq[:m] | ident1 | identfin[:m]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  bool json_out = f.json_out;
  try {
    const RunConfig rc = resolve(command, f, *sub);
    json_out = rc.json_out;
    if (command == "gamma") return cmd_gamma(rc, out);
    if (command == "pochhammer") return cmd_pochhammer(rc, out);
    if (command == "beta") return cmd_beta(rc, out);
    if (command == "verify") return cmd_verify(rc, out);
    return cmd_tree(rc, out);
  } catch (const UsageFailure& e) {
    err << "error: " << e.what() << '\n' << sub->help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n' << sub->help();
    return kExitUsage;
  } catch (const LibraryFailure& e) {
    const bool usage = e.status == ELLB_PARSE_ERROR || e.status == ELLB_INVALID_ARGUMENT;
    if (json_out) emit(out, error_record(command, f.identity, e.status, e.what()));
    err << "error: " << e.what() << '\n';
    return usage ? kExitUsage : kExitFailed;
  }
}

}  // namespace ellbailey::cli
