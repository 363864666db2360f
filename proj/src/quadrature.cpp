// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#include "ellbailey/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>

#include "ellbailey/error.hpp"

namespace ellbailey {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<int> resolve_order(int dims, std::span<const int> loop_order) {
  std::vector<int> order(loop_order.begin(), loop_order.end());
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(dims));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < dims; ++i) {
    if (static_cast<int>(sorted.size()) != dims || sorted[static_cast<std::size_t>(i)] != i) {
      throw Error(ErrorCode::domain, "loop order must be a permutation of the dimensions");
    }
  }
  return order;
}

// Runs body(row) for every row, spreading rows over hardware threads when the
// grid is large enough. Each row writes only its own slot, so the caller's
// ordered reduction is independent of scheduling.
template <class Body>
void for_each_row(int rows, std::size_t work_per_row, Body&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned threads = std::min<unsigned>(hw, static_cast<unsigned>(rows));
  if (threads <= 1 || static_cast<std::size_t>(rows) * work_per_row < 8192) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int r = static_cast<int>(t); r < rows; r += static_cast<int>(threads)) body(r);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Complex ordered_sum(const std::vector<Complex>& parts) {
  CompensatedSum total;
  for (const auto& x : parts) total.add(x);
  return total.value();
}

double cells(int n, int dims) { return std::pow(static_cast<double>(n), dims); }

template <class MeanAt>
QuadratureResult adapt(MeanAt&& mean_at, int dims, const QuadratureConfig& cfg) {
  cfg.validate();
  if (dims == 0) return {mean_at(1), {}, 0.0, true};
  int n = cfg.n_start;
  Complex previous = mean_at(n);
  double last_change = std::numeric_limits<double>::infinity();
  bool previous_passed = false;
  while (2 * n <= cfg.n_max) {
    const Complex current = mean_at(2 * n);
    const double change = std::abs(current - previous);
    const bool passed = change <= cfg.target * std::max(1.0, std::abs(current));
    n *= 2;
    if (passed && (dims < 2 || previous_passed)) {
      return {current, std::vector<int>(static_cast<std::size_t>(dims), n), change, true};
    }
    previous_passed = passed;
    previous = current;
    last_change = change;
  }
  return {previous, std::vector<int>(static_cast<std::size_t>(dims), n), last_change, false};
}

// A factor with its non-contour variables folded into the coefficient.
struct PreparedFactor {
  Complex coeff;
  std::vector<int> exps;  // one per contour variable
  int total_exp = 0;
  Location loc;
};

struct PreparedIntegrand {
  Complex constant{1.0, 0.0};
  std::vector<PreparedFactor> factors;
  int dims = 0;
};

PreparedIntegrand prepare(const Integrand& intg, const Assignment& a, const BaseParams& base,
                          const ToleranceSpec& tol) {
  PreparedIntegrand out;
  out.dims = static_cast<int>(intg.contour_vars.size());
  std::vector<GammaFactor> constants;
  for (const auto& f : intg.factors) {
    PreparedFactor pf{f.coeff.evaluate(a.params), std::vector<int>(intg.contour_vars.size(), 0), 0, f.loc};
    bool depends = false;
    for (const auto& [name, e] : f.vars) {
      auto it = std::find(intg.contour_vars.begin(), intg.contour_vars.end(), name);
      if (it != intg.contour_vars.end()) {
        pf.exps[static_cast<std::size_t>(it - intg.contour_vars.begin())] += e;
        pf.total_exp += e;
        depends = true;
      } else {
        auto vit = a.vars.find(name);
        if (vit == a.vars.end()) {
          throw Error(ErrorCode::unknown_symbol, "variable '" + name + "' has no value");
        }
        pf.coeff *= std::pow(vit->second, e);
      }
    }
    depends = std::any_of(pf.exps.begin(), pf.exps.end(), [](int e) { return e != 0; });
    if (depends) {
      out.factors.push_back(std::move(pf));
    } else {
      constants.push_back(f);
    }
  }
  out.constant = evaluate(constants, a, base, tol);
  return out;
}

Complex gamma_power(Complex arg, Location loc, const BaseParams& base, const ToleranceSpec& tol) {
  return loc == Location::numerator ? elliptic_gamma(arg, base, tol) : reciprocal_elliptic_gamma(arg, base, tol);
}

Complex rotation_power(int e) {
  return std::polar(1.0, kTwoPi * kGridRotationTurns * e);
}

// Grid state for the table method. Tables survive doublings: entry r of the
// n-table is entry 2r of the 2n-table.
class TableGrid {
 public:
  TableGrid(PreparedIntegrand prepared, const BaseParams& base, const ToleranceSpec& tol)
      : prep_(std::move(prepared)), base_(base), tol_(tol), tables_(prep_.factors.size()) {
    // Factors with identical exponent vectors share a lookup slot.
    std::map<std::vector<int>, std::size_t> slot_of;
    for (std::size_t i = 0; i < prep_.factors.size(); ++i) {
      auto [it, inserted] = slot_of.try_emplace(prep_.factors[i].exps, groups_.size());
      if (inserted) groups_.push_back(Group{prep_.factors[i].exps, {}, {}});
      groups_[it->second].members.push_back(i);
    }
  }

  Complex mean(int n, std::span<const int> loop_order) {
    extend_to(n);
    const int dims = prep_.dims;
    const auto order = resolve_order(dims, loop_order);
    const int mask = n - 1;
    const std::size_t ng = groups_.size();

    // exponent of group g along loop position d, reduced mod n
    std::vector<int> step(ng * static_cast<std::size_t>(dims));
    for (std::size_t g = 0; g < ng; ++g) {
      for (int d = 0; d < dims; ++d) {
        const int e = groups_[g].exps[static_cast<std::size_t>(order[static_cast<std::size_t>(d)])];
        step[g * dims + d] = ((e % n) + n) & mask;
      }
    }
    std::vector<Complex> row_sums(static_cast<std::size_t>(n));
    const std::size_t inner_cells = static_cast<std::size_t>(cells(n, dims - 1));
    for_each_row(n, inner_cells * (ng + 1), [&](int row) {
      std::vector<int> k(static_cast<std::size_t>(dims), 0);
      k[0] = row;
      std::vector<int> idx(ng);
      CompensatedSum sum;
      const int inner = dims - 1;
      while (true) {
        for (std::size_t g = 0; g < ng; ++g) {
          int s = 0;
          for (int d = 0; d < std::max(inner, 1); ++d) s += step[g * dims + d] * k[static_cast<std::size_t>(d)];
          idx[g] = s & mask;
        }
        if (inner == 0) {
          Complex v(1.0, 0.0);
          for (std::size_t g = 0; g < ng; ++g) v *= groups_[g].table[static_cast<std::size_t>(idx[g])];
          sum.add(v);
        } else {
          for (int kin = 0; kin < n; ++kin) {
            Complex v(1.0, 0.0);
            for (std::size_t g = 0; g < ng; ++g) {
              v *= groups_[g].table[static_cast<std::size_t>(idx[g])];
              idx[g] = (idx[g] + step[g * dims + inner]) & mask;
            }
            sum.add(v);
          }
        }
        // odometer over positions 1..inner-1
        int d = inner - 1;
        while (d >= 1) {
          if (++k[static_cast<std::size_t>(d)] < n) break;
          k[static_cast<std::size_t>(d)] = 0;
          --d;
        }
        if (d < 1) break;
      }
      row_sums[static_cast<std::size_t>(row)] = sum.value();
    });
    return prep_.constant * ordered_sum(row_sums) / cells(n, dims);
  }

 private:
  struct Group {
    std::vector<int> exps;
    std::vector<std::size_t> members;
    std::vector<Complex> table;
  };

  void extend_to(int n) {
    if (n == size_) return;
    for (std::size_t i = 0; i < prep_.factors.size(); ++i) {
      const auto& f = prep_.factors[i];
      const Complex c = f.coeff * rotation_power(f.total_exp);
      std::vector<Complex> next(static_cast<std::size_t>(n));
      const bool reuse = size_ > 0 && n == 2 * size_;
      for (int r = 0; r < n; ++r) {
        if (reuse && r % 2 == 0) {
          next[static_cast<std::size_t>(r)] = tables_[i][static_cast<std::size_t>(r / 2)];
        } else {
          next[static_cast<std::size_t>(r)] = gamma_power(c * std::polar(1.0, kTwoPi * r / n), f.loc, base_, tol_);
        }
      }
      tables_[i] = std::move(next);
    }
    for (auto& g : groups_) {
      g.table.assign(static_cast<std::size_t>(n), Complex(1.0, 0.0));
      for (std::size_t m : g.members) {
        for (int r = 0; r < n; ++r) g.table[static_cast<std::size_t>(r)] *= tables_[m][static_cast<std::size_t>(r)];
      }
    }
    size_ = n;
  }

  PreparedIntegrand prep_;
  const BaseParams& base_;
  ToleranceSpec tol_;
  std::vector<std::vector<Complex>> tables_;
  std::vector<Group> groups_;
  int size_ = 0;
};

Complex naive_mean(const PreparedIntegrand& prep, const BaseParams& base, const ToleranceSpec& tol, int n,
                   std::span<const int> loop_order) {
  const int dims = prep.dims;
  const auto order = resolve_order(dims, loop_order);
  std::vector<Complex> nodes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) nodes[static_cast<std::size_t>(k)] = grid_node(k, n);
  std::vector<Complex> row_sums(static_cast<std::size_t>(n));
  const std::size_t inner_cells = static_cast<std::size_t>(cells(n, dims - 1));
  for_each_row(n, inner_cells * prep.factors.size() * 64, [&](int row) {
    std::vector<int> k(static_cast<std::size_t>(dims), 0);
    k[0] = row;
    CompensatedSum sum;
    while (true) {
      Complex v(1.0, 0.0);
      for (const auto& f : prep.factors) {
        Complex arg = f.coeff;
        for (int d = 0; d < dims; ++d) {
          const int var = order[static_cast<std::size_t>(d)];
          const int e = f.exps[static_cast<std::size_t>(var)];
          if (e != 0) arg *= std::pow(nodes[static_cast<std::size_t>(k[static_cast<std::size_t>(d)])], e);
        }
        v *= gamma_power(arg, f.loc, base, tol);
      }
      sum.add(v);
      int d = dims - 1;
      while (d >= 1) {
        if (++k[static_cast<std::size_t>(d)] < n) break;
        k[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 1) break;
    }
    row_sums[static_cast<std::size_t>(row)] = sum.value();
  });
  return prep.constant * ordered_sum(row_sums) / cells(n, dims);
}

}  // namespace

Complex grid_rotation() { return std::polar(1.0, kTwoPi * kGridRotationTurns); }

Complex grid_node(int k, int n) {
  return std::polar(1.0, kTwoPi * (kGridRotationTurns + static_cast<double>(k) / n));
}

void QuadratureConfig::validate() const {
  if (n_start < 8 || !is_power_of_two(n_start) || !is_power_of_two(n_max) || n_start > n_max) {
    throw Error(ErrorCode::domain, "quadrature config needs powers of two with 8 <= n_start <= n_max");
  }
  if (!(target > 0.0)) throw Error(ErrorCode::domain, "quadrature target must be positive");
}

QuadratureConfig QuadratureConfig::defaults_for(int dims, double target) {
  return {16, dims <= 1 ? 1024 : dims == 2 ? 256 : 64, target};
}

void CompensatedSum::step(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

void CompensatedSum::add(Complex x) {
  step(re_, re_c_, x.real());
  step(im_, im_c_, x.imag());
}

Complex grid_mean(const TorusFunction& f, int dims, int n, std::span<const int> loop_order) {
  if (dims < 0) throw Error(ErrorCode::domain, "negative dimension");
  if (n < 1) throw Error(ErrorCode::domain, "grid needs at least one node");
  if (dims == 0) return f({});
  const auto order = resolve_order(dims, loop_order);
  std::vector<Complex> nodes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) nodes[static_cast<std::size_t>(k)] = grid_node(k, n);
  std::vector<Complex> row_sums(static_cast<std::size_t>(n));
  const std::size_t inner_cells = static_cast<std::size_t>(cells(n, dims - 1));
  for_each_row(n, inner_cells * 16, [&](int row) {
    std::vector<int> k(static_cast<std::size_t>(dims), 0);
    k[0] = row;
    std::vector<Complex> point(static_cast<std::size_t>(dims));
    CompensatedSum sum;
    while (true) {
      for (int d = 0; d < dims; ++d) {
        point[static_cast<std::size_t>(order[static_cast<std::size_t>(d)])] =
            nodes[static_cast<std::size_t>(k[static_cast<std::size_t>(d)])];
      }
      sum.add(f(point));
      int d = dims - 1;
      while (d >= 1) {
        if (++k[static_cast<std::size_t>(d)] < n) break;
        k[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 1) break;
    }
    row_sums[static_cast<std::size_t>(row)] = sum.value();
  });
  return ordered_sum(row_sums) / cells(n, dims);
}

QuadratureResult contour_mean(const TorusFunction& f, int dims, const QuadratureConfig& cfg) {
  return adapt([&](int n) { return grid_mean(f, dims, n); }, dims, cfg);
}

std::vector<Complex> factor_table(const GammaFactor& factor, const Assignment& a, const BaseParams& base, int n,
                                  const std::vector<std::string>& contour_vars, const ToleranceSpec& tol,
                                  Complex rotation) {
  if (n < 1) throw Error(ErrorCode::domain, "table needs at least one entry");
  Complex c = factor.coeff.evaluate(a.params);
  int total = 0;
  for (const auto& [name, e] : factor.vars) {
    if (std::find(contour_vars.begin(), contour_vars.end(), name) != contour_vars.end()) {
      total += e;
    } else {
      auto it = a.vars.find(name);
      if (it == a.vars.end()) throw Error(ErrorCode::unknown_symbol, "variable '" + name + "' has no value");
      c *= std::pow(it->second, e);
    }
  }
  c *= std::pow(rotation, total);
  std::vector<Complex> table(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    try {
      table[static_cast<std::size_t>(r)] = elliptic_gamma(c * std::polar(1.0, kTwoPi * r / n), base, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::pole) throw;
      throw Error(ErrorCode::pole, "table entry " + std::to_string(r) + " of " + factor.to_string() + ": " + e.what());
    }
  }
  return table;
}

Complex integrand_grid_mean(const Integrand& intg, const Assignment& a, const BaseParams& base, int n,
                            GridMethod method, const ToleranceSpec& tol, std::span<const int> loop_order) {
  if (!is_power_of_two(n)) throw Error(ErrorCode::domain, "grid size must be a power of two");
  auto prep = prepare(intg, a, base, tol);
  if (prep.dims == 0) return prep.constant;
  if (method == GridMethod::naive) return naive_mean(prep, base, tol, n, loop_order);
  TableGrid grid(std::move(prep), base, tol);
  return grid.mean(n, loop_order);
}

QuadratureResult integrate(const Integrand& intg, const Assignment& a, const BaseParams& base,
                           const QuadratureConfig& cfg, GridMethod method, const ToleranceSpec& tol) {
  auto prep = prepare(intg, a, base, tol);
  const int dims = prep.dims;
  if (dims == 0) return {prep.constant, {}, 0.0, true};
  if (method == GridMethod::naive) {
    return adapt([&](int n) { return naive_mean(prep, base, tol, n, {}); }, dims, cfg);
  }
  TableGrid grid(std::move(prep), base, tol);
  return adapt([&](int n) { return grid.mean(n, {}); }, dims, cfg);
}

}  // namespace ellbailey
