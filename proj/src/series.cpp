#include "negmnom/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "negmnom/domain.hpp"

namespace negmnom {

namespace {

std::size_t binomial_capped(int n, int k, std::size_t cap) {
  // C(n, k) computed incrementally, saturating at cap + 1.
  long double v = 1.0L;
  for (int i = 1; i <= k; ++i) {
    v = v * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (v > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(v)));
}

void fill_layer(int n, int remaining, int pos, std::vector<std::uint16_t>& cur,
                std::vector<std::uint16_t>& out) {
  if (pos == n - 1) {
    cur[pos] = static_cast<std::uint16_t>(remaining);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = static_cast<std::uint16_t>(e);
    fill_layer(n, remaining - e, pos + 1, cur, out);
  }
}

// out_k += weight * (f_j * g_{k-j}) restricted to layer k.
void accumulate_layer_product(const MonomialBasis& basis,
                              std::span<const double> f, int j,
                              std::span<const double> g, int i, double weight,
                              std::span<double> out) {
  for (std::size_t a = basis.layer_begin(j); a < basis.layer_end(j); ++a) {
    const double fa = f[a];
    if (fa == 0.0) continue;
    const double wf = weight * fa;
    const std::uint64_t ka = basis.key(a);
    for (std::size_t b = basis.layer_begin(i); b < basis.layer_end(i); ++b) {
      const double gb = g[b];
      if (gb == 0.0) continue;
      out[basis.index_of_key(ka + basis.key(b))] += wf * gb;
    }
  }
}

std::vector<bool> nonzero_layers(const TruncatedSeries& s) {
  const auto& basis = s.basis();
  std::vector<bool> nz(s.degree_cap() + 1, false);
  for (int k = 0; k <= s.degree_cap(); ++k)
    for (std::size_t i = basis.layer_begin(k); i < basis.layer_end(k); ++i)
      if (s[i] != 0.0) {
        nz[k] = true;
        break;
      }
  return nz;
}

std::span<double> mutable_coeffs(TruncatedSeries& s) {
  return {&s[0], s.size()};
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int degree_cap) : n_(n), cap_(degree_cap) {
  if (n < 1 || n > kMaxSeriesDimension)
    throw GuardExceeded("series dimension must be in [1, " +
                        std::to_string(kMaxSeriesDimension) + "]");
  if (degree_cap < 0 || degree_cap > kMaxSeriesDegree)
    throw GuardExceeded("degree cap must be in [0, " +
                        std::to_string(kMaxSeriesDegree) + "]");
  const std::size_t count = binomial_capped(n + degree_cap, n, kMaxSeriesTerms);
  if (count > kMaxSeriesTerms)
    throw GuardExceeded("series with n=" + std::to_string(n) + " and D=" +
                        std::to_string(degree_cap) + " exceeds " +
                        std::to_string(kMaxSeriesTerms) + " coefficients");
  bits_per_var_ = std::max(1, static_cast<int>(std::bit_width(
                                  static_cast<unsigned>(degree_cap))));
  if (bits_per_var_ * n > 64)
    throw GuardExceeded("exponent key does not fit in 64 bits");

  exps_.reserve(count * n);
  layer_offsets_.push_back(0);
  std::vector<std::uint16_t> cur(n, 0);
  for (int k = 0; k <= degree_cap; ++k) {
    fill_layer(n, k, 0, cur, exps_);
    layer_offsets_.push_back(exps_.size() / n);
  }
  const std::size_t total = exps_.size() / n;
  keys_.resize(total);
  lookup_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::uint64_t key = 0;
    for (int v = 0; v < n; ++v)
      key |= static_cast<std::uint64_t>(exps_[i * n + v]) << (v * bits_per_var_);
    keys_[i] = key;
    lookup_.emplace(key, i);
  }
}

int MonomialBasis::total_degree(std::size_t i) const {
  const auto it = std::upper_bound(layer_offsets_.begin(), layer_offsets_.end(), i);
  return static_cast<int>(it - layer_offsets_.begin()) - 1;
}

std::size_t MonomialBasis::index_of_key(std::uint64_t key) const {
  return lookup_.at(key);
}

std::size_t MonomialBasis::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(n_))
    throw InvalidArgument("multi-index length " + std::to_string(alpha.size()) +
                          " does not match n=" + std::to_string(n_));
  int degree = 0;
  std::uint64_t key = 0;
  for (int v = 0; v < n_; ++v) {
    if (alpha[v] < 0) throw InvalidArgument("negative exponent");
    degree += alpha[v];
    if (degree > cap_)
      throw InvalidArgument("multi-index exceeds degree cap " +
                            std::to_string(cap_));
    key |= static_cast<std::uint64_t>(alpha[v]) << (v * bits_per_var_);
  }
  return lookup_.at(key);
}

TruncatedSeries::TruncatedSeries(int n, int degree_cap)
    : basis_(std::make_shared<const MonomialBasis>(n, degree_cap)),
      coeffs_(basis_->size(), 0.0) {}

TruncatedSeries TruncatedSeries::constant(int n, int degree_cap, double value) {
  TruncatedSeries s(n, degree_cap);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::from_model(const AffineModel& model,
                                            int degree_cap) {
  TruncatedSeries s = constant(model.dimension(), degree_cap, 1.0);
  std::vector<int> alpha(model.dimension());
  for (const auto& [t, a] : model.terms()) {
    if (t.size() > degree_cap) continue;
    for (int v = 0; v < model.dimension(); ++v) alpha[v] = t.contains(v) ? 1 : 0;
    s.coeffs_[s.basis_->index_of(alpha)] -= a;
  }
  return s;
}

bool TruncatedSeries::same_shape(const TruncatedSeries& other) const {
  return dimension() == other.dimension() && degree_cap() == other.degree_cap();
}

double TruncatedSeries::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries convolve(const TruncatedSeries& s, const TruncatedSeries& t) {
  if (!s.same_shape(t))
    throw DimensionMismatch("convolve needs series of equal n and degree cap");
  TruncatedSeries out(s.dimension(), s.degree_cap());
  const auto& basis = s.basis();
  auto dst = mutable_coeffs(out);
  for (int k = 0; k <= s.degree_cap(); ++k)
    for (int j = 0; j <= k; ++j)
      accumulate_layer_product(basis, s.coefficients(), j, t.coefficients(),
                               k - j, 1.0, dst);
  return out;
}

// With E the Euler operator (alpha -> |alpha| on each coefficient),
// E s = s E(log s), so layer k of L = log s satisfies
//   k L_k = k s_k - sum_{j=1}^{k-1} j L_j s_{k-j}.
TruncatedSeries series_log(const TruncatedSeries& s) {
  if (std::abs(s[0] - 1.0) > 1e-12)
    throw InvalidArgument("series_log requires a unit constant term");
  const auto& basis = s.basis();
  const auto nz = nonzero_layers(s);
  TruncatedSeries log_s(s.dimension(), s.degree_cap());
  auto dst = mutable_coeffs(log_s);
  for (int k = 1; k <= s.degree_cap(); ++k) {
    const double inv_k = 1.0 / k;
    for (std::size_t i = basis.layer_begin(k); i < basis.layer_end(k); ++i)
      dst[i] = s[i];
    for (int j = 1; j < k; ++j) {
      if (!nz[k - j]) continue;
      accumulate_layer_product(basis, log_s.coefficients(), j, s.coefficients(),
                               k - j, -j * inv_k, dst);
    }
  }
  return log_s;
}

// f = exp(g): E f = f E g, so k f_k = sum_{j=1}^{k} j g_j f_{k-j}.
TruncatedSeries series_exp(const TruncatedSeries& g) {
  const auto& basis = g.basis();
  const auto nz = nonzero_layers(g);
  TruncatedSeries f(g.dimension(), g.degree_cap());
  auto dst = mutable_coeffs(f);
  dst[0] = std::exp(g[0]);
  for (int k = 1; k <= g.degree_cap(); ++k) {
    const double inv_k = 1.0 / k;
    for (int j = 1; j <= k; ++j) {
      if (!nz[j]) continue;
      accumulate_layer_product(basis, g.coefficients(), j, f.coefficients(),
                               k - j, j * inv_k, dst);
    }
  }
  return f;
}

TruncatedSeries expand_neg_power(const AffineModel& model, double lambda,
                                 int degree_cap) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("lambda must be positive and finite");
  TruncatedSeries g = series_log(TruncatedSeries::from_model(model, degree_cap));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= -lambda;
  return series_exp(g);
}

double rising_factorial(double lambda, int k) {
  if (k < 0) throw InvalidArgument("rising factorial needs k >= 0");
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= lambda + i;
  return v;
}

// J.C.P. Miller's recurrence for f = q^p, q_0 = 1:
//   f_k = (1/k) sum_{j=1}^{min(k,d)} ((p+1) j - k) q_j f_{k-j}.
std::vector<double> univariate_neg_power(std::span<const double> q,
                                         double lambda, int count) {
  if (q.empty() || std::abs(q[0] - 1.0) > 1e-12)
    throw InvalidArgument("univariate_neg_power requires q_0 = 1");
  if (count < 0) throw InvalidArgument("negative coefficient count");
  const double p = -lambda;
  const int d = static_cast<int>(q.size()) - 1;
  std::vector<double> f(count + 1, 0.0);
  f[0] = 1.0;
  for (int k = 1; k <= count; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(k, d); ++j)
      acc += ((p + 1.0) * j - k) * q[j] * f[k - j];
    f[k] = acc / k;
  }
  return f;
}

std::vector<double> directional_coefficients(const AffineModel& model,
                                             std::span<const double> s,
                                             double lambda, int count,
                                             DirectionalRoute route,
                                             double scale) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  const DirectionVector dir({s.begin(), s.end()});
  if (dir.size() != static_cast<std::size_t>(model.dimension()))
    throw DimensionMismatch("direction length does not match model dimension");

  if (route == DirectionalRoute::kUnivariate) {
    std::vector<double> q = ps_poly(model, dir).coeffs();
    double pw = 1.0;
    for (double& c : q) {
      c *= pw;
      pw *= scale;
    }
    return univariate_neg_power(q, lambda, count);
  }

  const TruncatedSeries c = expand_neg_power(model, lambda, count);
  const auto& basis = c.basis();
  std::vector<double> u(count + 1, 0.0);
  double pw = 1.0;
  for (int k = 0; k <= count; ++k) {
    double acc = 0.0;
    for (std::size_t i = basis.layer_begin(k); i < basis.layer_end(k); ++i) {
      const auto alpha = basis.exponents(i);
      double dot = 0.0;
      for (std::size_t v = 0; v < alpha.size(); ++v) dot += s[v] * alpha[v];
      acc += c[i] * std::exp(dot);
    }
    u[k] = acc * pw;
    pw *= scale;
  }
  return u;
}

}  // namespace negmnom
