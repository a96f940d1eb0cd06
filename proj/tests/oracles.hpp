#pragma once
// Reference computations shared by the test suites. Each one is independent
// of the code path it checks: higher precision, brute-force quadrature or a
// closed form.

#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<70>>;

// Σ x^k / Γ(αk + β) in 70-digit arithmetic, summed until terms are negligible.
inline double mittag_leffler_series(double alpha, double beta, double x) {
  const mp xm = x;
  mp sum = 0;
  mp power = 1;
  for (int k = 0; k < 20000; ++k) {
    const mp term = power / boost::math::tgamma(mp(alpha) * k + mp(beta));
    sum += term;
    if (k > 10 && abs(term) < 1e-30 * (abs(sum) + mp(1e-300))) break;
    power *= xm;
  }
  return static_cast<double>(sum);
}

// Same series in double precision; adequate for |x| ≤ 1.
inline double mittag_leffler_small(double alpha, double beta, double x) {
  double sum = 0.0;
  double power = 1.0;
  for (int k = 0; k < 60; ++k) {
    sum += power / std::tgamma(alpha * k + beta);
    power *= x;
  }
  return sum;
}

// E_{1/2,1}(x) = exp(x²) erfc(-x), evaluated in extended precision.
inline double mittag_leffler_half(double x) {
  const mp xm = x;
  return static_cast<double>(exp(xm * xm) * boost::math::erfc(-xm));
}

// Adaptive Gauss-Kronrod on [a, b].
template <class F>
double integrate(F f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, tol);
}

// Double-exponential quadrature, robust to endpoint singularities.
template <class F>
double integrate_singular(F f, double a, double b, double tol = 1e-13) {
  static boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, tol);
}

// Midpoint rule for ∫_0^T f(t) dt after t = u^p, which removes an integrable
// singularity of order t^{-1+1/p} at the origin.
template <class F>
double midpoint_power(F f, double horizon, int points, double p = 5.0) {
  const double umax = std::pow(horizon, 1.0 / p);
  const double h = umax / points;
  long double sum = 0.0L;
  for (int j = 0; j < points; ++j) {
    const double u = (j + 0.5) * h;
    sum += f(std::pow(u, p)) * p * std::pow(u, p - 1.0);
  }
  return static_cast<double>(sum * h);
}

// Product-trapezoid solution of x(t) = x0 + ∫_0^t K(t-s) (a - λ x(s)) ds with
// K(t) = t^{α-1}/Γ(α), solved implicitly node by node.
inline std::vector<double> linear_volterra(double alpha, double lambda, double x0, double a, double horizon,
                                           int steps) {
  const double h = horizon / steps;
  const double scale = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
  std::vector<double> x(steps + 1, x0);
  for (int k = 1; k <= steps; ++k) {
    // Weights of the piecewise-linear interpolant against (t_k - s)^{α-1}.
    auto w = [&](int j) {
      if (j == 0) return scale * (std::pow(k - 1.0, alpha + 1) - (k - 1.0 - alpha) * std::pow(k, alpha));
      if (j == k) return scale;
      return scale * (std::pow(k - j + 1.0, alpha + 1) - 2.0 * std::pow(k - j, alpha + 1) +
                      std::pow(k - j - 1.0, alpha + 1));
    };
    double acc = x0;
    for (int j = 0; j < k; ++j) acc += w(j) * (a - lambda * x[j]);
    const double wk = w(k);
    x[k] = (acc + wk * a) / (1.0 + wk * lambda);
  }
  return x;
}

}  // namespace oracle
