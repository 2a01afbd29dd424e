#pragma once

#include <vector>

#include "negmnom/subset_poly.hpp"

namespace negmnom {

// b_T for every nonempty T of [n], addressed by bitmask.
class BTable {
 public:
  explicit BTable(int n) : n_(n), values_(std::size_t{1} << n, 0.0) {}

  int dimension() const { return n_; }
  double operator[](SubsetId t) const { return values_.at(t.bits); }
  double& operator[](SubsetId t) { return values_.at(t.bits); }
  // Number of stored entries, 2^n - 1.
  std::size_t size() const { return values_.size() - 1; }

 private:
  int n_;
  std::vector<double> values_;
};

// b_T = sum over set partitions {T_1..T_l} of T of (l-1)! prod_i a_{T_i}.
// Equals the z^T coefficient of -log(1 - P).
double compute_bt(const AffineModel& model, SubsetId t);

BTable bt_table(const AffineModel& model);

struct DivisibilityVerdict {
  bool accepted = true;
  // First violating subset in bitmask order; meaningful when rejected.
  SubsetId witness;
  double witness_value = 0.0;
};

// Accepted iff b_T >= -tol for every nonempty T. tol = 0 is the exact
// criterion; a small positive slack helps with rounded decimal input.
DivisibilityVerdict is_infinitely_divisible(const AffineModel& model,
                                            double tol = 0.0);

}  // namespace negmnom
