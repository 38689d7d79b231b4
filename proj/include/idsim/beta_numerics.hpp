#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace idsim {

inline constexpr double kShapeDegenerateMin = 1e-6;

// Beta shape parameters with degeneracy flags. Shapes below
// kShapeDegenerateMin are never evaluated numerically; the interpreter
// routes them through the limiting-distribution rules instead.
struct ShapePair {
  double a = 1.0;
  double b_shape = 1.0;
  bool degenerate_a = false;
  bool degenerate_b = false;

  static ShapePair make(double a, double b) {
    ShapePair s;
    s.a = a;
    s.b_shape = b;
    s.degenerate_a = a < kShapeDegenerateMin;
    s.degenerate_b = b < kShapeDegenerateMin;
    return s;
  }

  bool degenerate() const { return degenerate_a || degenerate_b; }
};

// Raised when the quantile iteration fails to converge; carries the inputs.
class BetaInverseError : public std::runtime_error {
 public:
  BetaInverseError(double u, const ShapePair& shapes)
      : std::runtime_error("inverse regularized beta failed to converge at u=" +
                           std::to_string(u) + " a=" + std::to_string(shapes.a) +
                           " b=" + std::to_string(shapes.b_shape)),
        u(u),
        shapes(shapes) {}
  double u;
  ShapePair shapes;
};

namespace detail {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta, modified Lentz method.
inline double beta_cont_frac(double a, double b, double x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double fpmin = std::numeric_limits<double>::min() / eps;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b).
inline double reg_inc_beta(double x, const ShapePair& shapes) {
  if (shapes.degenerate())
    throw std::invalid_argument("reg_inc_beta requires non-degenerate shapes");
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("reg_inc_beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = shapes.a;
  const double b = shapes.b_shape;
  const double ln_front =
      a * std::log(x) + b * std::log1p(-x) - detail::log_beta(a, b);
  const double front = std::exp(ln_front);
  // Symmetry split keeps the continued fraction in its fast-converging region.
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_cont_frac(a, b, x) / a;
  return 1.0 - front * detail::beta_cont_frac(b, a, 1.0 - x) / b;
}

// Beta density, used as the Newton derivative in the inverse.
inline double beta_pdf(double x, const ShapePair& shapes) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = shapes.a;
  const double b = shapes.b_shape;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  detail::log_beta(a, b));
}

// Quantile of the Beta distribution: x with I_x(a, b) = u.
//
// The search runs in logit space: with small shapes the quantile can sit at
// scales like exp(-500), far below anything a linear bisection on [0, 1]
// reaches. A safeguarded Newton (bisection fallback) on t = logit(x)
// converges over the whole representable range; quantiles beyond it round
// to the nearest endpoint, which is the correctly rounded result there.
// Iteration cap 200.
inline double inv_reg_inc_beta(double u, const ShapePair& shapes) {
  if (shapes.degenerate())
    throw std::invalid_argument("inv_reg_inc_beta requires non-degenerate shapes");
  if (u < 0.0 || u > 1.0)
    throw std::invalid_argument("inv_reg_inc_beta requires u in [0, 1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;

  const auto x_of = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  double t_lo = -745.0, t_hi = 745.0;
  if (reg_inc_beta(x_of(t_lo), shapes) >= u) return 0.0;
  if (reg_inc_beta(x_of(t_hi), shapes) <= u) return 1.0;

  double t = 0.0;
  double f = reg_inc_beta(x_of(t), shapes) - u;
  double step = t_hi - t_lo, step_prev = step;
  for (int iter = 0; iter < 200; ++iter) {
    if (f == 0.0) break;
    if (f > 0.0) t_hi = t; else t_lo = t;
    if (t_hi - t_lo <= 1e-12) break;
    const double x = x_of(t);
    const double deriv = beta_pdf(x, shapes) * x * (1.0 - x);  // df/dt
    double t_next;
    // Newton only when it stays bracketed and keeps halving the step;
    // otherwise bisect, which guarantees progress.
    const bool newton_ok =
        deriv > 0.0 && std::isfinite(deriv) &&
        ((t - t_hi) * deriv - f) * ((t - t_lo) * deriv - f) < 0.0 &&
        std::fabs(2.0 * f) <= std::fabs(step_prev * deriv);
    step_prev = step;
    if (newton_ok) {
      step = f / deriv;
      t_next = t - step;
    } else {
      step = 0.5 * (t_hi - t_lo);
      t_next = t_lo + step;
    }
    if (t_next == t) break;
    t = t_next;
    f = reg_inc_beta(x_of(t), shapes) - u;
  }
  const double x = x_of(t);
  // Converged when the bracket collapsed (x resolved to ~1e-13) or the
  // residual vanished; anything else is a numerical failure.
  if (t_hi - t_lo <= 1e-12 || std::fabs(f) <= 1e-10) return x;
  throw BetaInverseError(u, shapes);
}

}  // namespace idsim
