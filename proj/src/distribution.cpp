#include "negmnom/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "negmnom/divisibility.hpp"
#include "negmnom/domain.hpp"

namespace negmnom {

DistributionSpec::DistributionSpec(AffineModel model, std::vector<double> a,
                                   double lambda, double divisibility_tol)
    : model_(std::move(model)), a_(std::move(a)), lambda_(lambda) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
    throw InvalidArgument("lambda must be positive and finite");
  if (a_.size() != static_cast<std::size_t>(model_.dimension()))
    throw DimensionMismatch("shift vector length does not match model");
  for (double v : a_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument("shift entries must be positive and finite");

  const auto id = is_infinitely_divisible(model_, divisibility_tol);
  if (!id.accepted)
    throw DomainRejected("model is not infinitely divisible: b_{" +
                             id.witness.to_string() + "} < 0",
                         id.witness_value);

  std::vector<double> theta(a_);
  for (double& v : theta) v = std::log(v);
  const auto verdict = classify(model_, theta);
  margin_ = verdict.margin;
  if (verdict.classification != Classification::kInside)
    throw DomainRejected("log(a) is " +
                             std::string(to_string(verdict.classification)) +
                             " the domain (margin " +
                             std::to_string(verdict.margin) + ")",
                         verdict.margin);
  normalizer_ = evaluate(model_, a_);
}

double NormalizedPgf::evaluate(std::span<const double> z) const {
  if (z.size() != static_cast<std::size_t>(n))
    throw DimensionMismatch("z length does not match PGF dimension");
  double v = constant;
  for (const auto& [t, c] : terms) v += c * monomial(t, z);
  return v;
}

NormalizedPgf normalized_pgf(const DistributionSpec& spec) {
  NormalizedPgf pgf;
  pgf.n = spec.model().dimension();
  const double norm = spec.normalizer();
  pgf.constant = 1.0 / norm;
  for (const auto& [t, a] : spec.model().terms())
    pgf.terms[t] = -a * monomial(t, spec.a()) / norm;
  return pgf;
}

PmfTable::PmfTable(TruncatedSeries probs) : probs_(std::move(probs)) {
  for (double p : probs_.coefficients()) mass_ += p;
}

PmfTable pmf(const DistributionSpec& spec, int degree_cap) {
  TruncatedSeries c = expand_neg_power(spec.model(), spec.lambda(), degree_cap);
  const auto& basis = c.basis();
  std::vector<double> log_a(spec.a().begin(), spec.a().end());
  for (double& v : log_a) v = std::log(v);
  const double norm = std::pow(spec.normalizer(), spec.lambda());
  const double log_norm = spec.lambda() * std::log(spec.normalizer());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto alpha = basis.exponents(i);
    // Direct powers are exact for the usual dyadic shifts; log space takes
    // over when the weight would leave the normal range.
    double w = norm;
    for (std::size_t v = 0; v < alpha.size(); ++v) w *= std::pow(spec.a()[v], alpha[v]);
    if (!std::isnormal(w)) {
      double e = log_norm;
      for (std::size_t v = 0; v < alpha.size(); ++v) e += alpha[v] * log_a[v];
      w = std::exp(e);
    }
    c[i] *= w;
  }
  return PmfTable(std::move(c));
}

std::vector<double> mean(const DistributionSpec& spec) {
  const int n = spec.model().dimension();
  std::vector<double> m(n);
  for (int j = 0; j < n; ++j)
    m[j] = -spec.lambda() * spec.a()[j] * partial(spec.model(), spec.a(), j) /
           spec.normalizer();
  return m;
}

int sampler_degree(const DistributionSpec& spec) {
  for (int d = 16; d <= kMaxSeriesDegree; d *= 2) {
    const PmfTable table = pmf(spec, d);
    if (table.tail_mass() < kMaxSamplerTailMass) return d;
  }
  throw ExcessTailMass("no admissible degree cap reaches the tail threshold",
                       1.0);
}

std::vector<std::vector<int>> sample(const DistributionSpec& spec,
                                     std::size_t count, std::uint64_t seed,
                                     int degree_cap) {
  const PmfTable table = pmf(spec, degree_cap);
  if (!(table.tail_mass() < kMaxSamplerTailMass))
    throw ExcessTailMass("tail mass " + std::to_string(table.tail_mass()) +
                             " beyond degree " + std::to_string(degree_cap) +
                             " is too large; raise the degree cap",
                         table.tail_mass());
  if (count == 0) return {};

  const auto& probs = table.probabilities();
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs[i]);
    cdf[i] = acc;
  }

  // 53 random bits straight from the engine keep draws identical across
  // standard library implementations.
  std::mt19937_64 engine(seed);
  std::vector<std::vector<int>> draws;
  draws.reserve(count);
  const auto& basis = probs.basis();
  for (std::size_t k = 0; k < count; ++k) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto alpha = basis.exponents(static_cast<std::size_t>(it - cdf.begin()));
    draws.emplace_back(alpha.begin(), alpha.end());
  }
  return draws;
}

}  // namespace negmnom
