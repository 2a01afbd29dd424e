#pragma once

// Independent reference computations used only by tests. None of these
// share code paths with the library routines they check.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "negmnom/subset_poly.hpp"

namespace negmnom::testing {

// Stirling numbers of the second kind by the triangle recurrence
// S(n,k) = k S(n-1,k) + S(n-1,k-1).
inline std::vector<std::vector<std::uint64_t>> stirling2_table(int max_n) {
  std::vector<std::vector<std::uint64_t>> s(max_n + 1,
                                            std::vector<std::uint64_t>(max_n + 1, 0));
  s[0][0] = 1;
  for (int n = 1; n <= max_n; ++n)
    for (int k = 1; k <= n; ++k) s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
  return s;
}

inline std::uint64_t bell(int n) {
  const auto s = stirling2_table(n);
  std::uint64_t b = 0;
  for (int k = 0; k <= n; ++k) b += s[n][k];
  return b;
}

// Sparse multivariate polynomial keyed by exponent vector.
using SparsePoly = std::map<std::vector<int>, double>;

inline SparsePoly sparse_mul(const SparsePoly& f, const SparsePoly& g, int cap) {
  SparsePoly out;
  for (const auto& [a, x] : f)
    for (const auto& [b, y] : g) {
      std::vector<int> c(a.size());
      int deg = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = a[i] + b[i];
        deg += c[i];
      }
      if (deg <= cap) out[c] += x * y;
    }
  return out;
}

inline SparsePoly p_as_sparse(const AffineModel& model) {
  SparsePoly p;
  for (const auto& [t, a] : model.terms()) {
    std::vector<int> e(model.dimension());
    for (int v = 0; v < model.dimension(); ++v) e[v] = t.contains(v) ? 1 : 0;
    p[e] += a;
  }
  return p;
}

// (1 - P)^{-lambda} = sum_k <lambda>_k / k! P^k, truncated at total degree
// cap. P has no constant term, so k <= cap suffices.
inline SparsePoly binomial_series_oracle(const AffineModel& model, double lambda,
                                         int cap) {
  const int n = model.dimension();
  const SparsePoly p = p_as_sparse(model);
  SparsePoly power{{std::vector<int>(n, 0), 1.0}};
  SparsePoly total = power;
  double weight = 1.0;
  for (int k = 1; k <= cap; ++k) {
    power = sparse_mul(power, p, cap);
    weight *= (lambda + k - 1) / k;
    for (const auto& [e, v] : power) total[e] += weight * v;
  }
  return total;
}

// -log(1 - P) = sum_{k>=1} P^k / k, truncated at total degree cap.
inline SparsePoly neg_log_oracle(const AffineModel& model, int cap) {
  const int n = model.dimension();
  const SparsePoly p = p_as_sparse(model);
  SparsePoly power{{std::vector<int>(n, 0), 1.0}};
  SparsePoly total;
  for (int k = 1; k <= cap; ++k) {
    power = sparse_mul(power, p, cap);
    for (const auto& [e, v] : power) total[e] += v / k;
  }
  return total;
}

inline double lookup(const SparsePoly& f, const std::vector<int>& e) {
  auto it = f.find(e);
  return it == f.end() ? 0.0 : it->second;
}

// Random model with every a_T drawn from [lo, hi] (singletons from [0, hi]).
inline AffineModel random_model(std::mt19937_64& rng, int n, double lo, double hi,
                                double density = 1.0) {
  std::uniform_real_distribution<double> coef(lo, hi);
  std::uniform_real_distribution<double> single(0.0, hi);
  std::bernoulli_distribution keep(density);
  std::map<SubsetId, double> c;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    const SubsetId t(bits);
    if (t.size() == 1)
      c[t] = single(rng);
    else if (keep(rng))
      c[t] = coef(rng);
  }
  return AffineModel(n, std::move(c));
}

// Partition sum for b_T written out independently: recursive split of T
// into the block containing its lowest element and the rest, tracking the
// block count.
inline void bt_blocks(const AffineModel& m, std::uint32_t rest, int blocks,
                      double prod, std::vector<double>& by_len) {
  if (rest == 0) {
    by_len[blocks] += prod;
    return;
  }
  const std::uint32_t low = rest & (~rest + 1);
  const std::uint32_t others = rest & ~low;
  // Enumerate subsets of `others` to join `low`.
  std::uint32_t sub = others;
  while (true) {
    const std::uint32_t block = low | sub;
    const double a = m.coeff(SubsetId(block));
    if (a != 0.0) bt_blocks(m, rest & ~block, blocks + 1, prod * a, by_len);
    if (sub == 0) break;
    sub = (sub - 1) & others;
  }
}

inline double bt_recursive(const AffineModel& m, SubsetId t) {
  std::vector<double> by_len(t.size() + 1, 0.0);
  bt_blocks(m, t.bits, 0, 1.0, by_len);
  double total = 0.0;
  double fact = 1.0;
  for (int l = 1; l <= t.size(); ++l) {
    total += fact * by_len[l];
    fact *= l;
  }
  return total;
}

// Random infinitely divisible model: draw coefficients, then raise a_T in
// order of increasing |T| until b_T >= 0. b_T is a_T plus terms involving
// strictly smaller subsets, so earlier corrections stay valid.
inline AffineModel random_accepted_model(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> single(0.05, 1.0);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::map<SubsetId, double> c;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    const SubsetId t(bits);
    c[t] = t.size() == 1 ? single(rng) : coef(rng);
  }
  for (int size = 2; size <= n; ++size)
    for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
      const SubsetId t(bits);
      if (t.size() != size) continue;
      const double b = bt_recursive(AffineModel(n, c), t);
      if (b < 0.0) c[t] += -b + 1e-12;
    }
  return AffineModel(n, std::move(c));
}

inline AffineModel example1_model(double a12 = -0.5) {
  return AffineModel(2, {{SubsetId::of({1}), 1.0},
                         {SubsetId::of({2}), 1.0},
                         {SubsetId::of({1, 2}), a12}});
}

inline AffineModel example2_model(double a = 1.0, double b = 0.0) {
  return AffineModel(3, {{SubsetId::of({1}), 1.0},
                         {SubsetId::of({2}), 1.0},
                         {SubsetId::of({3}), 1.0},
                         {SubsetId::of({1, 2}), a},
                         {SubsetId::of({1, 3}), a},
                         {SubsetId::of({2, 3}), a},
                         {SubsetId::of({1, 2, 3}), b}});
}

}  // namespace negmnom::testing
