#include "qht/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qht/error.hpp"
#include "qht/quadrature.hpp"

namespace qht {

namespace {

void require_unit_interval(const EntropicFunction& e, const char* what) {
  if (e.a() != 0.0 || e.b() != 1.0) {
    std::ostringstream os;
    os << what << " requires e sampled on [0, 1], got [" << e.a() << ", " << e.b() << "]";
    throw ValidationError(os.str());
  }
}

double discrete_sup(const std::vector<double>& s, const std::vector<double>& e, double theta) {
  double best = -kInf;
  for (std::size_t i = 0; i < s.size(); ++i) best = std::max(best, theta * s[i] - e[i]);
  return best;
}

}  // namespace

EntropicFunction::EntropicFunction(double a, double b, std::vector<double> values, double convex_tol)
    : a_(a), b_(b), values_(std::move(values)) {
  if (!(a < b)) throw ValidationError("entropic function needs a < b");
  if (values_.size() < 33) {
    std::ostringstream os;
    os << "entropic function needs N >= 32 grid intervals, got " << static_cast<long>(values_.size()) - 1;
    throw ValidationError(os.str());
  }
  double scale = 1.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "entropic function value at index " << i << " is not finite";
      throw ValidationError(os.str());
    }
    scale = std::max(scale, std::abs(values_[i]));
  }
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) {
    const double d2 = values_[i + 1] - 2.0 * values_[i] + values_[i - 1];
    if (d2 < worst) {
      worst = d2;
      worst_i = i;
    }
  }
  if (worst < -convex_tol * scale) {
    std::ostringstream os;
    os << "entropic function is not convex: second difference " << worst << " at s = " << s(static_cast<int>(worst_i));
    throw ValidationError(os.str());
  }
}

EntropicFunction EntropicFunction::sample(double a, double b, int n, const std::function<double(double)>& e,
                                          double convex_tol) {
  if (n < 32) throw ValidationError("entropic function needs N >= 32 grid intervals");
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  const double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = e(i == n ? b : a + i * h);
  EntropicFunction out(a, b, std::move(v), convex_tol);
  out.set_exact(e);
  return out;
}

std::vector<double> EntropicFunction::grid() const {
  std::vector<double> g(values_.size());
  for (int i = 0; i <= n(); ++i) g[static_cast<std::size_t>(i)] = s(i);
  return g;
}

RateFunction::RateFunction(std::vector<double> theta, std::vector<double> phi, std::vector<double> s,
                           std::vector<double> e)
    : theta_(std::move(theta)), phi_(std::move(phi)), s_(std::move(s)), e_(std::move(e)) {
  const std::size_t n = s_.size() - 1;
  const double h = s_[1] - s_[0];
  left_tail_ = (e_[1] - e_[0]) / h;
  right_tail_ = (e_[n] - e_[n - 1]) / (s_[n] - s_[n - 1]);
}

double RateFunction::operator()(double theta) const { return discrete_sup(s_, e_, theta); }

RateFunction legendre(const EntropicFunction& e, const std::vector<double>& theta_grid) {
  if (theta_grid.empty()) throw ValidationError("legendre: empty theta grid");
  const std::vector<double> s = e.grid();
  std::vector<double> phi(theta_grid.size());
  for (std::size_t j = 0; j < theta_grid.size(); ++j) phi[j] = discrete_sup(s, e.values(), theta_grid[j]);
  return RateFunction(theta_grid, std::move(phi), s, e.values());
}

double inverse_legendre(const RateFunction& phi, double s) {
  double best = -kInf;
  for (std::size_t j = 0; j < phi.theta().size(); ++j) best = std::max(best, s * phi.theta()[j] - phi.phi()[j]);
  return best;
}

Subdifferential subdifferential(const EntropicFunction& e, double s) {
  if (!(s >= e.a() && s <= e.b())) {
    std::ostringstream os;
    os << "subdifferential: s = " << s << " outside [" << e.a() << ", " << e.b() << "]";
    throw ValidationError(os.str());
  }
  const int i = std::clamp(static_cast<int>(std::lround((s - e.a()) / e.h())), 0, e.n());
  Subdifferential d{-kInf, kInf};
  if (i > 0) d.minus = (e.value(i) - e.value(i - 1)) / (e.s(i) - e.s(i - 1));
  if (i < e.n()) d.plus = (e.value(i + 1) - e.value(i)) / (e.s(i + 1) - e.s(i));
  return d;
}

double psi(const EntropicFunction& e, double r) {
  require_unit_interval(e, "psi");
  if (r < -e.value(e.n())) return -kInf;
  double best = -kInf;
  for (int i = 0; i < e.n(); ++i) {
    const double s = e.s(i);
    if (s > 1.0 - kPsiCap) break;
    best = std::max(best, (-s * r - e.value(i)) / (1.0 - s));
  }
  return -best;
}

ChernoffResult chernoff_exponent(const EntropicFunction& e) {
  require_unit_interval(e, "chernoff_exponent");
  const auto& v = e.values();
  const int i = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  ChernoffResult best{v[static_cast<std::size_t>(i)], e.s(i)};
  const int lo = std::max(0, i - 1);
  const int hi = std::min(e.n(), i + 1);
  if (e.has_exact()) {
    const MinimizeResult m = golden_section_minimize([&e](double s) { return e.exact(s); }, e.s(lo), e.s(hi));
    if (m.value < best.exponent) best = {m.value, m.argmin};
    return best;
  }
  if (i == 0 || i == e.n()) return best;
  // vertex of the parabola through the three bracketing samples
  const double h = e.h();
  const double fm = v[static_cast<std::size_t>(i - 1)];
  const double f0 = v[static_cast<std::size_t>(i)];
  const double fp = v[static_cast<std::size_t>(i + 1)];
  const double curv = fp - 2.0 * f0 + fm;
  if (curv <= 0) return best;
  const double offset = 0.5 * h * (fm - fp) / curv;
  const double value = f0 - (fp - fm) * (fp - fm) / (8.0 * curv);
  if (value < best.exponent) best = {value, e.s(i) + offset};
  return best;
}

double hoeffding_exponent(const EntropicFunction& e, double r) { return psi(e, r); }

double stein_exponent(const EntropicFunction& e) {
  require_unit_interval(e, "stein_exponent");
  return -subdifferential(e, 1.0).minus;
}

double rate_infimum(const RateFunction& phi, double lo, double hi) {
  const auto& th = phi.theta();
  const auto [mn, mx] = std::minmax_element(th.begin(), th.end());
  if (!(lo < hi) || lo < *mn || hi > *mx) {
    std::ostringstream os;
    os << "rate_infimum: interval (" << lo << ", " << hi << ") must lie inside the theta grid [" << *mn << ", "
       << *mx << "]";
    throw ValidationError(os.str());
  }
  double best = kInf;
  for (std::size_t j = 0; j < th.size(); ++j)
    if (th[j] > lo && th[j] < hi) best = std::min(best, phi.phi()[j]);
  if (best == kInf) throw ValidationError("rate_infimum: no theta grid point inside the interval");
  // phi is continuous, so the infimum over the open interval includes the
  // limits at the endpoints
  best = std::min({best, phi(lo), phi(hi)});
  const MinimizeResult m = golden_section_minimize([&phi](double t) { return phi(t); }, lo, hi);
  return std::min(best, m.value);
}

}  // namespace qht
