#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "negmnom/subset_poly.hpp"

namespace negmnom {

inline constexpr int kMaxSeriesDimension = 12;
// Budget on the number of stored coefficients C(n+D, n). For n >= 6 this
// binds before the nominal degree cap does.
inline constexpr std::size_t kMaxSeriesTerms = std::size_t{1} << 22;
inline constexpr int kMaxSeriesDegree = 512;

// Every multi-index alpha in N^n with |alpha| <= D, in graded lexicographic
// order: by total degree, then lexicographically descending in the
// exponents, so (2,0) < (1,1) < (0,2).
class MonomialBasis {
 public:
  MonomialBasis(int n, int degree_cap);

  int dimension() const { return n_; }
  int degree_cap() const { return cap_; }
  std::size_t size() const { return keys_.size(); }

  std::span<const std::uint16_t> exponents(std::size_t i) const {
    return {exps_.data() + i * n_, static_cast<std::size_t>(n_)};
  }
  int total_degree(std::size_t i) const;
  // Indices [layer_begin(k), layer_begin(k+1)) hold the monomials of degree k.
  std::size_t layer_begin(int k) const { return layer_offsets_[k]; }
  std::size_t layer_end(int k) const { return layer_offsets_[k + 1]; }

  // Packed exponent key; keys add when monomials multiply.
  std::uint64_t key(std::size_t i) const { return keys_[i]; }
  std::size_t index_of_key(std::uint64_t key) const;
  // Throws InvalidArgument for wrong length or |alpha| > D.
  std::size_t index_of(std::span<const int> alpha) const;

 private:
  int n_;
  int cap_;
  int bits_per_var_;
  std::vector<std::uint16_t> exps_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::size_t> layer_offsets_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

// Multivariate power series truncated at total degree D, dense over the
// monomial basis.
class TruncatedSeries {
 public:
  // Zero series. Throws GuardExceeded when n or the term count is too big.
  TruncatedSeries(int n, int degree_cap);
  static TruncatedSeries constant(int n, int degree_cap, double value);
  // A = 1 - P as a series.
  static TruncatedSeries from_model(const AffineModel& model, int degree_cap);

  int dimension() const { return basis_->dimension(); }
  int degree_cap() const { return basis_->degree_cap(); }
  std::size_t size() const { return coeffs_.size(); }
  const MonomialBasis& basis() const { return *basis_; }

  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double coefficient(std::span<const int> alpha) const {
    return coeffs_[basis_->index_of(alpha)];
  }
  double coefficient(std::initializer_list<int> alpha) const {
    const std::vector<int> v(alpha);
    return coefficient(std::span<const int>(v));
  }
  std::span<const double> coefficients() const { return coeffs_; }

  bool same_shape(const TruncatedSeries& other) const;
  // max_i |c_i| over the stored coefficients.
  double max_abs() const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> coeffs_;
};

// Cauchy product truncated at the common cap. Throws DimensionMismatch
// unless n and D agree.
TruncatedSeries convolve(const TruncatedSeries& s, const TruncatedSeries& t);

// Formal logarithm; requires a unit constant term (within 1e-12).
TruncatedSeries series_log(const TruncatedSeries& s);

// Formal exponential; the constant term of the result is exp(s_0).
TruncatedSeries series_exp(const TruncatedSeries& s);

// Coefficients c_alpha(lambda) of (1 - P)^{-lambda} = exp(-lambda log(1-P)).
TruncatedSeries expand_neg_power(const AffineModel& model, double lambda,
                                 int degree_cap);

// lambda (lambda+1) ... (lambda+k-1); 1 for k = 0.
double rising_factorial(double lambda, int k);

// Coefficients of q(t)^{-lambda} for q_0 = 1, up to t^count.
std::vector<double> univariate_neg_power(std::span<const double> q,
                                         double lambda, int count);

enum class DirectionalRoute {
  kUnivariate,  // expand P_s(t)^{-lambda} in one variable
  kCollapse,    // sum c_alpha e^{s.alpha} over each layer of the full series
};

// u_0..u_N with u_k = sum_{|alpha|=k} c_alpha(lambda) e^{s.alpha}, each
// multiplied by scale^k. Scaling keeps long runs finite when the radius is
// far from 1. Requires sum(s) = 0 within 1e-12.
std::vector<double> directional_coefficients(
    const AffineModel& model, std::span<const double> s, double lambda,
    int count, DirectionalRoute route = DirectionalRoute::kUnivariate,
    double scale = 1.0);

}  // namespace negmnom
