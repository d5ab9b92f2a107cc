#include "qht/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "qht/error.hpp"

namespace qht {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth, long& evals,
              double& err) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  evals += 2;
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    std::ostringstream os;
    os << "adaptive quadrature did not converge on [" << p.a << ", " << p.b << "], local error " << std::abs(delta);
    throw NumericalError(os.str());
  }
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1, evals, err) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1, evals, err);
}

void check_finite(double v, double x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand is not finite at x = " << x;
    throw NumericalError(os.str());
  }
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int initial_panels, int max_depth) {
  if (!(tol > 0)) throw ValidationError("quadrature tolerance must be positive");
  if (initial_panels < 1) throw ValidationError("need at least one initial panel");
  QuadratureResult r;
  if (a == b) return r;
  const auto g = [&f](double x) {
    const double v = f(x);
    check_finite(v, x);
    return v;
  };
  const double h = (b - a) / initial_panels;
  double x0 = a;
  double f0 = g(x0);
  r.evaluations = 1;
  for (int i = 0; i < initial_panels; ++i) {
    const double x1 = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
    const double xm = 0.5 * (x0 + x1);
    const double fm = g(xm);
    const double f1 = g(x1);
    r.evaluations += 2;
    const Panel p{x0, f0, xm, fm, x1, f1, simpson(x0, f0, fm, x1, f1)};
    r.value += refine(g, p, tol / initial_panels, max_depth, r.evaluations, r.error_estimate);
    x0 = x1;
    f0 = f1;
  }
  return r;
}

QuadratureResult composite_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                   int initial_panels, int max_doublings) {
  if (!(tol > 0)) throw ValidationError("quadrature tolerance must be positive");
  QuadratureResult r;
  if (a == b) return r;
  int n = 2 * std::max(1, initial_panels);
  const auto rule = [&](int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    r.evaluations += panels + 1;
    return s * h / 3.0;
  };
  double prev = rule(n);
  for (int k = 0; k < max_doublings; ++k) {
    n *= 2;
    const double cur = rule(n);
    check_finite(cur, a);
    if (std::abs(cur - prev) <= tol) {
      r.value = cur + (cur - prev) / 15.0;
      r.error_estimate = std::abs(cur - prev) / 15.0;
      return r;
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "composite Simpson did not reach tolerance " << tol << " with " << n << " panels";
  throw NumericalError(os.str());
}

MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double a, double b, double x_tol,
                                       int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? MinimizeResult{c, fc} : MinimizeResult{d, fd};
}

}  // namespace qht
