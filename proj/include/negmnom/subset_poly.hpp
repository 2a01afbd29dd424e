#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "negmnom/errors.hpp"

namespace negmnom {

inline constexpr int kMaxDimension = 24;
inline constexpr int kMaxPartitionCardinality = 12;

// A subset of {1,...,n} stored as a bitmask; bit i-1 represents index i.
struct SubsetId {
  std::uint32_t bits = 0;

  constexpr SubsetId() = default;
  constexpr explicit SubsetId(std::uint32_t b) : bits(b) {}

  // Build from 1-based indices.
  static SubsetId of(std::initializer_list<int> indices);

  constexpr bool empty() const { return bits == 0; }
  int size() const { return std::popcount(bits); }
  // 0-based position test.
  constexpr bool contains(int pos) const { return (bits >> pos) & 1u; }

  // Comma-separated ascending 1-based indices, e.g. "1,3". Empty set -> "".
  std::string to_string() const;

  friend constexpr auto operator<=>(SubsetId, SubsetId) = default;
};

// A = 1 - P with P(z) = sum_{T nonempty} a_T z^T. Only the a_T of P are
// stored; absent subsets have coefficient zero.
class AffineModel {
 public:
  AffineModel() = default;
  // Throws InvalidArgument on n outside [1, kMaxDimension], an empty
  // subset, a subset outside [n], or a non-finite coefficient.
  AffineModel(int n, std::map<SubsetId, double> coeffs);

  int dimension() const { return n_; }
  double coeff(SubsetId t) const;
  const std::map<SubsetId, double>& terms() const { return coeffs_; }

  // Largest |T| carrying a nonzero coefficient.
  int degree() const;

 private:
  int n_ = 0;
  std::map<SubsetId, double> coeffs_;
};

// Value of z^T = prod_{t in T} z_t.
double monomial(SubsetId t, std::span<const double> z);

// A(z) = 1 - P(z).
double evaluate(const AffineModel& model, std::span<const double> z);

// dA/dz_j at z (j is 0-based).
double partial(const AffineModel& model, std::span<const double> z, int j);

// Model with coefficients a_T * prod_{t in T} scale_t, so that
// evaluate(result, z) == evaluate(model, scale o z). Not normalized.
AffineModel scale(const AffineModel& model, std::span<const double> factors);

struct Partition {
  std::vector<SubsetId> blocks;
  std::size_t length() const { return blocks.size(); }
};

namespace detail {

template <typename Visitor>
void partition_recurse(const std::array<int, 32>& elems, int m, int i,
                       std::array<SubsetId, 32>& blocks, int used,
                       Visitor& visit) {
  if (i == m) {
    visit(std::span<const SubsetId>(blocks.data(), used));
    return;
  }
  const std::uint32_t bit = 1u << elems[i];
  for (int b = 0; b < used; ++b) {
    blocks[b].bits |= bit;
    partition_recurse(elems, m, i + 1, blocks, used, visit);
    blocks[b].bits &= ~bit;
  }
  blocks[used] = SubsetId(bit);
  partition_recurse(elems, m, i + 1, blocks, used + 1, visit);
  blocks[used] = SubsetId();
}

void check_partition_guard(SubsetId t);

}  // namespace detail

// Calls visit(std::span<const SubsetId>) once per set partition of t, in
// restricted-growth-string order. The span is only valid during the call.
template <typename Visitor>
void for_each_partition(SubsetId t, Visitor&& visit) {
  detail::check_partition_guard(t);
  std::array<int, 32> elems{};
  int m = 0;
  for (int pos = 0; pos < 32; ++pos)
    if (t.contains(pos)) elems[m++] = pos;
  std::array<SubsetId, 32> blocks{};
  detail::partition_recurse(elems, m, 0, blocks, 0, visit);
}

std::vector<Partition> partitions_of(SubsetId t);

}  // namespace negmnom
