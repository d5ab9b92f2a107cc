#pragma once

#include <functional>

namespace qht {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive Simpson with Richardson correction, absolute tolerance `tol`.
/// The interval is pre-split into `initial_panels` panels so that a smooth
/// integrand cannot fool the first error estimate. Throws NumericalError if
/// a panel still fails the tolerance at `max_depth`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int initial_panels = 16, int max_depth = 40);

/// Composite Simpson rule, doubling the panel count until two successive
/// values agree to `tol`. Throws NumericalError after `max_doublings`.
QuadratureResult composite_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                   int initial_panels = 8, int max_doublings = 20);

/// Golden-section minimisation of a unimodal function on [a, b].
struct MinimizeResult {
  double argmin = 0.0;
  double value = 0.0;
};
MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                       double x_tol = 1e-12, int max_iter = 200);

}  // namespace qht
