#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "negmnom/subset_poly.hpp"

namespace negmnom {

inline constexpr double kDefaultMarginTol = 1e-9;
// Directions are kept in a range where exp(s_i) is comfortably finite.
inline constexpr double kMaxDirectionEntry = 40.0;

// Real polynomial q_0 + q_1 t + ... + q_d t^d.
class UnivariatePoly {
 public:
  UnivariatePoly() = default;
  explicit UnivariatePoly(std::vector<double> coeffs)
      : coeffs_(std::move(coeffs)) {}

  const std::vector<double>& coeffs() const { return coeffs_; }
  // Degree after ignoring trailing exact zeros; -1 for the zero polynomial.
  int degree() const;
  double operator()(double t) const;
  double derivative(double t) const;

 private:
  std::vector<double> coeffs_;
};

// A point of the hyperplane H = {s : s_1 + ... + s_n = 0}.
class DirectionVector {
 public:
  // Throws InvalidArgument when sum(s) is not zero within
  // 1e-12 (1 + max|s_i|) or some |s_i| exceeds kMaxDirectionEntry.
  explicit DirectionVector(std::vector<double> s);
  // Zero direction in dimension n.
  static DirectionVector zero(int n);

  std::span<const double> values() const { return s_; }
  std::size_t size() const { return s_.size(); }

 private:
  std::vector<double> s_;
};

enum class Classification { kInside, kBoundary, kOutside };
std::string_view to_string(Classification c);

struct MembershipVerdict {
  Classification classification = Classification::kOutside;
  // log R_s - mean(theta); positive inside.
  double margin = 0.0;
  std::vector<double> s;
  double radius = 0.0;
  double theta_bar = 0.0;
};

// P_s(t) = A(t e^{s_1}, ..., t e^{s_n}); q_0 = 1 and
// q_k = -sum_{|T|=k} a_T exp(sum_{t in T} s_t).
UnivariatePoly ps_poly(const AffineModel& model, const DirectionVector& s);

// Least t > 0 with p(t) = 0. Roots come from the companion matrix, are
// filtered for realness, and the smallest positive one is polished with a
// bracketed Newton iteration. Throws DegenerateModel for the constant
// polynomial and NoPositiveRoot when no positive real root exists.
double smallest_positive_root(const UnivariatePoly& p);

// log R_s.
double log_radius(const AffineModel& model, const DirectionVector& s);

// theta is inside iff mean(theta) < log R_s with s the projection of theta
// onto H. The verdict does not depend on lambda.
MembershipVerdict classify(const AffineModel& model,
                           std::span<const double> theta,
                           double tol = kDefaultMarginTol);

// s + log R_s (1, ..., 1).
std::vector<double> boundary_point(const AffineModel& model,
                                   const DirectionVector& s);

// |A(e^theta)|; zero on the boundary.
double boundary_residual(const AffineModel& model,
                         std::span<const double> theta);

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  // Parses "lo:hi:step".
  static GridRange parse(std::string_view text);
  std::size_t count() const;
  double value(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

struct BoundaryRow {
  std::vector<double> params;
  std::vector<double> theta;
  double residual = 0.0;
};

// Boundary point cloud over uniform steps in s-space. For n = 2 the free
// parameter is s_1 with s = (s_1, -s_1); for n = 3 it is (s_1, s_2) with
// s_3 = -s_1 - s_2 and second_range is required. Rows come out in
// parameter order (s_1 outer) regardless of threads.
std::vector<BoundaryRow> boundary_grid(
    const AffineModel& model, const GridRange& range,
    const std::optional<GridRange>& second_range = std::nullopt,
    unsigned threads = 1);

// For the family A = 1 - z_1 - z_2 - a z_1 z_2 and theta_1 < 0, the
// boundary ordinate -log(1 + (a+1)/(e^{-theta_1} - 1)).
double closed_form_boundary_2d(const AffineModel& model, double theta1);

}  // namespace negmnom
