#include "negmnom/divisibility.hpp"

#include <array>
#include <map>
#include <string>

namespace negmnom {

namespace {

constexpr std::array<double, kMaxPartitionCardinality + 1> kFactorial = [] {
  std::array<double, kMaxPartitionCardinality + 1> f{};
  f[0] = 1.0;
  for (std::size_t i = 1; i < f.size(); ++i)
    f[i] = f[i - 1] * static_cast<double>(i);
  return f;
}();

void check_table_guard(const AffineModel& model) {
  if (model.dimension() > kMaxPartitionCardinality)
    throw GuardExceeded("b_T table limited to n <= " +
                        std::to_string(kMaxPartitionCardinality));
}

// Dense a_T lookup so the partition sum avoids map searches.
std::vector<double> dense_coeffs(const AffineModel& model) {
  std::vector<double> a(std::size_t{1} << model.dimension(), 0.0);
  for (const auto& [t, v] : model.terms()) a[t.bits] = v;
  return a;
}

template <typename Lookup>
double partition_sum(const Lookup& a, SubsetId t) {
  double total = 0.0;
  for_each_partition(t, [&](std::span<const SubsetId> blocks) {
    double prod = kFactorial[blocks.size() - 1];
    for (SubsetId b : blocks) {
      prod *= a[b.bits];
      if (prod == 0.0) return;
    }
    total += prod;
  });
  return total;
}

}  // namespace

double compute_bt(const AffineModel& model, SubsetId t) {
  const std::uint32_t full = (1u << model.dimension()) - 1u;
  if (t.bits & ~full)
    throw InvalidArgument("subset {" + t.to_string() + "} exceeds n=" +
                          std::to_string(model.dimension()));
  detail::check_partition_guard(t);
  // Only subsets of t are ever read; compress the table onto them.
  std::map<SubsetId, double> sub;
  for (const auto& [s, v] : model.terms())
    if ((s.bits & ~t.bits) == 0) sub.emplace(s, v);
  struct Lookup {
    const std::map<SubsetId, double>& m;
    double operator[](std::uint32_t bits) const {
      auto it = m.find(SubsetId(bits));
      return it == m.end() ? 0.0 : it->second;
    }
  };
  return partition_sum(Lookup{sub}, t);
}

BTable bt_table(const AffineModel& model) {
  check_table_guard(model);
  const auto a = dense_coeffs(model);
  BTable table(model.dimension());
  for (std::uint32_t bits = 1; bits < (1u << model.dimension()); ++bits)
    table[SubsetId(bits)] = partition_sum(a, SubsetId(bits));
  return table;
}

DivisibilityVerdict is_infinitely_divisible(const AffineModel& model,
                                            double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  const BTable table = bt_table(model);
  for (std::uint32_t bits = 1; bits < (1u << model.dimension()); ++bits) {
    const double b = table[SubsetId(bits)];
    if (b < -tol) return {false, SubsetId(bits), b};
  }
  return {};
}

}  // namespace negmnom
