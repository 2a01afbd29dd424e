#include "negmnom/subset_poly.hpp"

#include <cmath>
#include <string>

namespace negmnom {

SubsetId SubsetId::of(std::initializer_list<int> indices) {
  SubsetId t;
  for (int i : indices) {
    if (i < 1 || i > 32) throw InvalidArgument("subset index out of range");
    t.bits |= 1u << (i - 1);
  }
  return t;
}

std::string SubsetId::to_string() const {
  std::string out;
  for (int pos = 0; pos < 32; ++pos) {
    if (!contains(pos)) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(pos + 1);
  }
  return out;
}

AffineModel::AffineModel(int n, std::map<SubsetId, double> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  if (n < 1 || n > kMaxDimension)
    throw InvalidArgument("dimension must be in [1, " +
                          std::to_string(kMaxDimension) + "], got " +
                          std::to_string(n));
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (const auto& [t, a] : coeffs_) {
    if (t.empty())
      throw InvalidArgument("P carries no constant term (empty subset)");
    if (t.bits & ~full)
      throw InvalidArgument("subset {" + t.to_string() + "} exceeds n=" +
                            std::to_string(n));
    if (!std::isfinite(a))
      throw InvalidArgument("non-finite coefficient for {" + t.to_string() +
                            "}");
  }
}

double AffineModel::coeff(SubsetId t) const {
  auto it = coeffs_.find(t);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int AffineModel::degree() const {
  int d = 0;
  for (const auto& [t, a] : coeffs_)
    if (a != 0.0 && t.size() > d) d = t.size();
  return d;
}

double monomial(SubsetId t, std::span<const double> z) {
  double v = 1.0;
  for (std::size_t pos = 0; pos < z.size(); ++pos)
    if (t.contains(static_cast<int>(pos))) v *= z[pos];
  return v;
}

namespace {
void check_length(const AffineModel& model, std::size_t len) {
  if (len != static_cast<std::size_t>(model.dimension()))
    throw DimensionMismatch("expected a vector of length " +
                            std::to_string(model.dimension()) + ", got " +
                            std::to_string(len));
}
}  // namespace

double evaluate(const AffineModel& model, std::span<const double> z) {
  check_length(model, z.size());
  double p = 0.0;
  for (const auto& [t, a] : model.terms()) p += a * monomial(t, z);
  return 1.0 - p;
}

double partial(const AffineModel& model, std::span<const double> z, int j) {
  check_length(model, z.size());
  if (j < 0 || j >= model.dimension())
    throw DimensionMismatch("partial derivative index out of range");
  double dp = 0.0;
  for (const auto& [t, a] : model.terms()) {
    if (!t.contains(j)) continue;
    dp += a * monomial(SubsetId(t.bits & ~(1u << j)), z);
  }
  return -dp;
}

AffineModel scale(const AffineModel& model, std::span<const double> factors) {
  check_length(model, factors.size());
  for (double f : factors)
    if (!(f > 0.0) || !std::isfinite(f))
      throw InvalidArgument("scale entries must be positive and finite");
  std::map<SubsetId, double> out;
  for (const auto& [t, a] : model.terms()) out[t] = a * monomial(t, factors);
  return AffineModel(model.dimension(), std::move(out));
}

namespace detail {
void check_partition_guard(SubsetId t) {
  if (t.empty()) throw InvalidArgument("cannot partition the empty set");
  if (t.size() > kMaxPartitionCardinality)
    throw GuardExceeded("partition enumeration limited to |T| <= " +
                        std::to_string(kMaxPartitionCardinality));
}
}  // namespace detail

std::vector<Partition> partitions_of(SubsetId t) {
  std::vector<Partition> out;
  for_each_partition(t, [&](std::span<const SubsetId> blocks) {
    out.push_back(Partition{{blocks.begin(), blocks.end()}});
  });
  return out;
}

}  // namespace negmnom
