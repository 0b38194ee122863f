#pragma once

// Reference computations used as test oracles. They deliberately avoid the
// library's closed forms: brute-force enumeration, quadrature and finite
// differences only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n = 20000) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// E[c_j 1(j searched before i)] / C_j when c = C u with u ~ Beta(alpha, 1)
// iid, and rho = (p_i C_j) / (p_j C_i): the integral over u_j of
// alpha u^alpha P(u_i > u rho). For alpha < 1 the substitution u = w^(1/alpha)
// removes the singular derivative at 0.
inline double beta_pair_cost(double alpha, double rho) {
  if (alpha >= 1.0) {
    auto g = [&](double u) { return alpha * std::pow(u, alpha) * (1.0 - std::pow(std::min(u * rho, 1.0), alpha)); };
    return simpson(g, 0.0, std::min(1.0, 1.0 / rho));
  }
  const double ra = std::pow(rho, alpha);
  const double kink = std::min(1.0, 1.0 / ra);
  auto g = [&](double w) { return std::pow(w, 1.0 / alpha) * (1.0 - std::min(w * ra, 1.0)); };
  return simpson(g, 0.0, kink);
}

// Raw expected search cost under c_k = C_k u_k, u_k ~ Beta(alpha, 1) iid, by
// quadrature of each pairwise term.
inline double beta_raw_cost(const std::vector<double>& p, std::size_t i, const std::vector<double>& base,
                            double alpha) {
  double total = alpha / (alpha + 1.0) * base[i];
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j == i) continue;
    total += base[j] * beta_pair_cost(alpha, (p[i] * base[j]) / (p[j] * base[i]));
  }
  return total;
}

// Expected cost of searching in `order` when the true class is drawn from p.
inline double expected_order_cost(const std::vector<double>& p, const std::vector<double>& costs,
                                  const std::vector<std::size_t>& order) {
  double total = 0.0, spent = 0.0;
  for (std::size_t k : order) {
    spent += costs[k];
    total += p[k] * spent;
  }
  return total;
}

// Minimum of expected_order_cost over all K! orders.
inline double best_order_cost(const std::vector<double>& p, const std::vector<double>& costs) {
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, expected_order_cost(p, costs, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Regret of a fixed search order under threshold weight a/c + b/(1-c),
// integrated numerically step by step. h_t is the conditional mass of the
// class tested at step t.
inline double threshold_regret(const std::vector<double>& p, std::size_t truth,
                               const std::vector<std::size_t>& order, double a, double b) {
  double remaining = 0.0;
  for (double x : p) remaining += x;
  double total = 0.0;
  for (std::size_t k : order) {
    const double h = p[k] / remaining;
    if (k == truth) {
      // int_h^1 (1 - c) w(c) dc, in log coordinates c = e^s.
      auto f = [&](double s) {
        const double c = std::exp(s);
        return (a * (1.0 - c) / c + b) * c;
      };
      return total + simpson(f, std::log(h), 0.0);
    }
    // int_0^h c w(c) dc.
    total += simpson([&](double c) { return a + b * c / (1.0 - c); }, 0.0, h);
    remaining -= p[k];
  }
  return total;
}

inline double macro_f1(const std::vector<long>& tp, const std::vector<long>& fp, const std::vector<long>& fn) {
  double sum = 0.0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    const long d = 2 * tp[k] + fp[k] + fn[k];
    sum += d == 0 ? 0.0 : 2.0 * static_cast<double>(tp[k]) / static_cast<double>(d);
  }
  return sum / static_cast<double>(tp.size());
}

// Expected macro-F1 after one more instance labeled y ~ p and predicted k.
inline double lookahead_macro_f1(const std::vector<double>& p, std::vector<long> tp, std::vector<long> fp,
                                 std::vector<long> fn, std::size_t k) {
  double expected = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    auto t = tp, f = fp, n = fn;
    if (y == k) {
      ++t[k];
    } else {
      ++f[k];
      ++n[y];
    }
    expected += p[y] * macro_f1(t, f, n);
  }
  return expected;
}

// Kendall tau-b by explicit pair counting.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool tx = x[i] == x[j], ty = y[i] == y[j];
      if (tx && ty) continue;
      if (tx) {
        ++tie_x;
      } else if (ty) {
        ++tie_y;
      } else if ((x[i] < x[j]) == (y[i] < y[j])) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double denom = std::sqrt(static_cast<double>(concordant + discordant + tie_x) *
                                 static_cast<double>(concordant + discordant + tie_y));
  return denom == 0.0 ? 0.0 : static_cast<double>(concordant - discordant) / denom;
}

// Central difference of f at x.
inline double central_difference(const std::function<double(double)>& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace oracle
