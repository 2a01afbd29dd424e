#include "negmnom/domain.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

namespace negmnom {

int UnivariatePoly::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k)
    if (coeffs_[k] != 0.0) return k;
  return -1;
}

double UnivariatePoly::operator()(double t) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
  return v;
}

double UnivariatePoly::derivative(double t) const {
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;)
    v = v * t + static_cast<double>(k) * coeffs_[k];
  return v;
}

DirectionVector::DirectionVector(std::vector<double> s) : s_(std::move(s)) {
  if (s_.empty()) throw InvalidArgument("empty direction vector");
  double sum = 0.0;
  double largest = 0.0;
  for (double v : s_) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite direction entry");
    sum += v;
    largest = std::max(largest, std::abs(v));
  }
  if (largest > kMaxDirectionEntry)
    throw InvalidArgument("direction entries must satisfy |s_i| <= 40");
  if (std::abs(sum) > 1e-12 * (1.0 + largest))
    throw InvalidArgument("direction does not lie in H (sum = " +
                          std::to_string(sum) + ")");
}

DirectionVector DirectionVector::zero(int n) {
  return DirectionVector(std::vector<double>(n, 0.0));
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kInside:
      return "inside";
    case Classification::kBoundary:
      return "boundary";
    case Classification::kOutside:
      return "outside";
  }
  return "unknown";
}

UnivariatePoly ps_poly(const AffineModel& model, const DirectionVector& s) {
  if (s.size() != static_cast<std::size_t>(model.dimension()))
    throw DimensionMismatch("direction length does not match model dimension");
  std::vector<double> q(model.dimension() + 1, 0.0);
  q[0] = 1.0;
  const auto sv = s.values();
  for (const auto& [t, a] : model.terms()) {
    double exponent = 0.0;
    for (int v = 0; v < model.dimension(); ++v)
      if (t.contains(v)) exponent += sv[v];
    q[t.size()] -= a * std::exp(exponent);
  }
  return UnivariatePoly(std::move(q));
}

namespace {

// Newton iteration kept inside a sign-changing bracket [lo, hi] of f,
// falling back to bisection whenever a step leaves it.
template <typename F, typename DF>
double bracketed_newton(F f, DF df, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = df(x);
    double next = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      return next;
    }
    x = next;
  }
  return x;
}

// Smallest bracket around r where g changes sign, or nullopt.
template <typename G>
std::optional<std::pair<double, double>> sign_bracket(G g, double r) {
  for (double delta : {1e-10, 1e-8, 1e-6, 1e-4}) {
    const double lo = r * (1.0 - delta);
    const double hi = r * (1.0 + delta);
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0 || ghi == 0.0 || (glo > 0.0) != (ghi > 0.0))
      return std::make_pair(lo, hi);
  }
  return std::nullopt;
}

}  // namespace

double smallest_positive_root(const UnivariatePoly& p) {
  const auto& c = p.coeffs();
  if (c.empty() || std::abs(c[0] - 1.0) > 1e-12)
    throw InvalidArgument("polynomial must have unit constant term");
  const int d = p.degree();
  if (d < 1) throw DegenerateModel("polynomial is the constant 1");

  if (d == 1) {
    const double r = -c[0] / c[1];
    if (r > 0.0) return r;
    throw NoPositiveRoot("linear polynomial has no positive root");
  }

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw NoPositiveRoot("eigenvalue iteration did not converge");
  const Eigen::VectorXcd roots = solver.eigenvalues();

  // Absolute size of the terms of p at t, for judging |p(t)| ~ 0.
  auto term_scale = [&](double t) {
    double v = 0.0;
    double pw = 1.0;
    for (int k = 0; k <= d; ++k) {
      v += std::abs(c[k]) * pw;
      pw *= t;
    }
    return v;
  };

  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double re = roots[i].real();
    const double im = std::abs(roots[i].imag());
    if (!(re > 0.0)) continue;
    const double mag = std::abs(roots[i]);
    bool real = im <= 1e-9 * (1.0 + mag);
    // A double root (tangency) splits into a pair with imaginary parts of
    // order sqrt(eps); accept it when p and p' both nearly vanish there.
    if (!real && im <= 1e-6 * (1.0 + mag)) {
      real = std::abs(p(re)) <= 1e-10 * term_scale(re);
    }
    if (real) best = std::min(best, re);
  }
  if (!std::isfinite(best))
    throw NoPositiveRoot("polynomial has no positive real root");

  auto f = [&](double t) { return p(t); };
  auto df = [&](double t) { return p.derivative(t); };
  if (auto br = sign_bracket(f, best)) {
    return bracketed_newton(f, df, br->first, br->second);
  }
  // Even multiplicity: polish the root of p' instead.
  auto d2f = [&](double t) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 2;)
      v = v * t + static_cast<double>(k * (k - 1)) * c[k];
    return v;
  };
  if (auto br = sign_bracket(df, best)) {
    return bracketed_newton(df, d2f, br->first, br->second);
  }
  return best;
}

double log_radius(const AffineModel& model, const DirectionVector& s) {
  return std::log(smallest_positive_root(ps_poly(model, s)));
}

MembershipVerdict classify(const AffineModel& model,
                           std::span<const double> theta, double tol) {
  const int n = model.dimension();
  if (theta.size() != static_cast<std::size_t>(n))
    throw DimensionMismatch("theta length " + std::to_string(theta.size()) +
                            " does not match n=" + std::to_string(n));
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  for (double v : theta)
    if (!std::isfinite(v)) throw InvalidArgument("non-finite theta entry");

  MembershipVerdict verdict;
  verdict.theta_bar = std::accumulate(theta.begin(), theta.end(), 0.0) / n;
  std::vector<double> s(theta.begin(), theta.end());
  for (double& v : s) v -= verdict.theta_bar;
  // Re-center so the rounding residue of the mean does not leave H.
  const double drift = std::accumulate(s.begin(), s.end(), 0.0) / n;
  for (double& v : s) v -= drift;

  const DirectionVector dir(s);
  verdict.radius = smallest_positive_root(ps_poly(model, dir));
  verdict.margin = std::log(verdict.radius) - verdict.theta_bar;
  verdict.s = std::move(s);
  if (std::abs(verdict.margin) <= tol)
    verdict.classification = Classification::kBoundary;
  else
    verdict.classification = verdict.margin > 0.0 ? Classification::kInside
                                                  : Classification::kOutside;
  return verdict;
}

std::vector<double> boundary_point(const AffineModel& model,
                                   const DirectionVector& s) {
  const double lr = log_radius(model, s);
  std::vector<double> theta(s.values().begin(), s.values().end());
  for (double& v : theta) v += lr;
  return theta;
}

double boundary_residual(const AffineModel& model,
                         std::span<const double> theta) {
  std::vector<double> z(theta.begin(), theta.end());
  for (double& v : z) v = std::exp(v);
  return std::abs(evaluate(model, z));
}

GridRange GridRange::parse(std::string_view text) {
  GridRange r;
  double* fields[] = {&r.lo, &r.hi, &r.step};
  std::size_t start = 0;
  for (int f = 0; f < 3; ++f) {
    const std::size_t colon = text.find(':', start);
    if ((f < 2) == (colon == std::string_view::npos))
      throw InvalidArgument("range must look like lo:hi:step, got '" +
                            std::string(text) + "'");
    const std::string piece(text.substr(start, colon - start));
    std::size_t used = 0;
    try {
      *fields[f] = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (piece.empty() || used != piece.size())
      throw InvalidArgument("bad number '" + piece + "' in range");
    start = colon + 1;
  }
  if (!(r.hi >= r.lo)) throw InvalidArgument("range needs lo <= hi");
  if (r.hi > r.lo && !(r.step > 0.0))
    throw InvalidArgument("range step must be positive");
  return r;
}

std::size_t GridRange::count() const {
  if (!(hi > lo)) return 1;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

std::vector<BoundaryRow> boundary_grid(const AffineModel& model,
                                       const GridRange& range,
                                       const std::optional<GridRange>& second_range,
                                       unsigned threads) {
  const int n = model.dimension();
  if (n != 2 && n != 3)
    throw InvalidArgument("boundary grids are laid out for n = 2 or 3 only");
  if (n == 3 && !second_range)
    throw InvalidArgument("n = 3 grids need a second range");
  if (n == 2 && second_range)
    throw InvalidArgument("n = 2 grids take a single range");

  const std::size_t outer = range.count();
  const std::size_t inner = (n == 3) ? second_range->count() : 1;
  std::vector<BoundaryRow> rows(outer * inner);

  auto compute = [&](std::size_t idx) {
    BoundaryRow& row = rows[idx];
    const double s1 = range.value(idx / inner);
    std::vector<double> s;
    if (n == 2) {
      row.params = {s1};
      s = {s1, -s1};
    } else {
      const double s2 = second_range->value(idx % inner);
      row.params = {s1, s2};
      s = {s1, s2, -s1 - s2};
    }
    row.theta = boundary_point(model, DirectionVector(std::move(s)));
    row.residual = boundary_residual(model, row.theta);
  };

  threads = std::max(1u, std::min<unsigned>(threads, 64));
  if (threads == 1 || rows.size() < 2) {
    for (std::size_t i = 0; i < rows.size(); ++i) compute(i);
    return rows;
  }
  std::vector<std::exception_ptr> failures(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < rows.size(); i += threads) compute(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
  return rows;
}

double closed_form_boundary_2d(const AffineModel& model, double theta1) {
  if (model.dimension() != 2 || model.coeff(SubsetId::of({1})) != 1.0 ||
      model.coeff(SubsetId::of({2})) != 1.0)
    throw InvalidArgument(
        "closed form applies to n = 2 models with a_1 = a_2 = 1");
  if (!(theta1 < 0.0)) throw InvalidArgument("closed form needs theta1 < 0");
  const double a = model.coeff(SubsetId::of({1, 2}));
  return -std::log1p((a + 1.0) / std::expm1(-theta1));
}

}  // namespace negmnom
