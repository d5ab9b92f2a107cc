#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace qht {

/// A convex function e on [a, b], sampled on the uniform grid s_i = a + i h,
/// i = 0..N, N >= 32. An exact callable may be attached; it is only used to
/// refine minimisers between grid nodes.
class EntropicFunction {
 public:
  /// Throws ValidationError if N < 32, a value is not finite, or a second
  /// difference falls below -convex_tol * max(1, max|e_i|).
  EntropicFunction(double a, double b, std::vector<double> values, double convex_tol = 1e-8);

  static EntropicFunction sample(double a, double b, int n, const std::function<double(double)>& e,
                                 double convex_tol = 1e-8);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return static_cast<int>(values_.size()) - 1; }
  double h() const { return (b_ - a_) / n(); }
  double s(int i) const { return i == n() ? b_ : a_ + i * h(); }
  double value(int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double> grid() const;

  bool has_exact() const { return static_cast<bool>(exact_); }
  double exact(double s) const { return exact_(s); }
  void set_exact(std::function<double(double)> e) { exact_ = std::move(e); }

 private:
  double a_, b_;
  std::vector<double> values_;
  std::function<double(double)> exact_;
};

/// phi(theta) = max_i (theta s_i - e_i) on a theta grid, together with the
/// sampled e so that phi can be evaluated exactly off the grid.
class RateFunction {
 public:
  RateFunction(std::vector<double> theta, std::vector<double> phi, std::vector<double> s, std::vector<double> e);

  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& phi() const { return phi_; }
  /// Discrete supremum at an arbitrary theta.
  double operator()(double theta) const;
  /// phi is affine, equal to a theta - e(a), for theta <= left_tail();
  /// and b theta - e(b) for theta >= right_tail().
  double left_tail() const { return left_tail_; }
  double right_tail() const { return right_tail_; }

 private:
  std::vector<double> theta_, phi_, s_, e_;
  double left_tail_, right_tail_;
};

RateFunction legendre(const EntropicFunction& e, const std::vector<double>& theta_grid);

/// sup_theta (s theta - phi(theta)) over the rate function's theta grid.
double inverse_legendre(const RateFunction& phi, double s);

struct Subdifferential {
  double minus;
  double plus;
};

/// One-sided difference quotients at the grid node nearest to s; at s = a the
/// left derivative is -inf, at s = b the right derivative is +inf.
Subdifferential subdifferential(const EntropicFunction& e, double s);

/// -sup_{s in [0, 1 - 1e-6]} (-s r - e(s)) / (1 - s) over the grid; -inf for
/// r < -e(1). Requires e on [0, 1].
double psi(const EntropicFunction& e, double r);

struct ChernoffResult {
  double exponent;
  double argmin;
};

/// inf_{s in [0,1]} e(s): grid minimum refined by golden section on the
/// bracketing cells (on the exact callable when present, otherwise on the
/// quadratic through the three bracketing samples).
ChernoffResult chernoff_exponent(const EntropicFunction& e);
double hoeffding_exponent(const EntropicFunction& e, double r);
/// -D^- e(1).
double stein_exponent(const EntropicFunction& e);

/// inf_{theta in (lo, hi)} phi(theta). Throws ValidationError if the interval
/// leaves the theta grid range or contains no grid point.
double rate_infimum(const RateFunction& phi, double lo, double hi);

inline constexpr double kPsiCap = 1e-6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace qht
