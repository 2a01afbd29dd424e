#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "negmnom/series.hpp"
#include "negmnom/subset_poly.hpp"

namespace negmnom {

inline constexpr double kMaxSamplerTailMass = 1e-6;

// (model, a, lambda) with the model infinitely divisible and log(a) inside
// the domain of the Laplace transform. The constructor enforces both and
// throws DomainRejected otherwise.
class DistributionSpec {
 public:
  DistributionSpec(AffineModel model, std::vector<double> a, double lambda,
                   double divisibility_tol = 0.0);

  const AffineModel& model() const { return model_; }
  std::span<const double> a() const { return a_; }
  double lambda() const { return lambda_; }
  // log R_s - mean(log a) at construction; positive.
  double margin() const { return margin_; }
  // A(a) > 0.
  double normalizer() const { return normalizer_; }

 private:
  AffineModel model_;
  std::vector<double> a_;
  double lambda_;
  double margin_ = 0.0;
  double normalizer_ = 0.0;
};

// Q(z) = A(a_1 z_1, ..., a_n z_n) / A(a); the PGF is Q^{-lambda}.
struct NormalizedPgf {
  int n = 0;
  double constant = 0.0;
  std::map<SubsetId, double> terms;

  double evaluate(std::span<const double> z) const;
};

NormalizedPgf normalized_pgf(const DistributionSpec& spec);

class PmfTable {
 public:
  explicit PmfTable(TruncatedSeries probs);

  const TruncatedSeries& probabilities() const { return probs_; }
  double probability(std::span<const int> alpha) const {
    return probs_.coefficient(alpha);
  }
  double stored_mass() const { return mass_; }
  // 1 - sum of stored probabilities.
  double tail_mass() const { return 1.0 - mass_; }

 private:
  TruncatedSeries probs_;
  double mass_ = 0.0;
};

// p_alpha = c_alpha(lambda) a^alpha A(a)^lambda for |alpha| <= degree_cap,
// from a single expansion of the unscaled model.
PmfTable pmf(const DistributionSpec& spec, int degree_cap);

// E[X_j] = -lambda a_j (dA/dz_j)(a) / A(a).
std::vector<double> mean(const DistributionSpec& spec);

// Inverse-CDF draws over the graded-lex truncated pmf, renormalized by its
// own mass. Deterministic in seed. Throws ExcessTailMass when the mass
// beyond degree_cap is kMaxSamplerTailMass or more.
std::vector<std::vector<int>> sample(const DistributionSpec& spec,
                                     std::size_t count, std::uint64_t seed,
                                     int degree_cap);

// Smallest degree cap in {16, 32, 64, ...} whose tail mass is below
// kMaxSamplerTailMass, within the series budget.
int sampler_degree(const DistributionSpec& spec);

}  // namespace negmnom
