#include "roughmf/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/zeta.hpp>

#include "roughmf/errors.hpp"
#include "roughmf/special_functions.hpp"

namespace roughmf {

cplx riccati_rhs(cplx z, cplx x, const ModelParams& p) {
  return 0.5 * (z * z - z) + (p.rho * p.nu * z - p.lambda) * x + 0.5 * p.nu * p.nu * x * x;
}

void check_strip(cplx z) {
  if (!(z.real() >= 0.0 && z.real() <= 1.0) || !std::isfinite(z.imag())) {
    throw DomainError("transform argument must satisfy Re z in [0, 1]");
  }
}

MultiFactorScheme parse_scheme(std::string_view name) {
  if (name == "exponential_euler") return MultiFactorScheme::exponential_euler;
  if (name == "exponential_trapezoid") return MultiFactorScheme::exponential_trapezoid;
  throw ConfigError("unknown multi-factor scheme '" + std::string(name) + "'");
}

std::string to_string(MultiFactorScheme scheme) {
  return scheme == MultiFactorScheme::exponential_euler ? "exponential_euler" : "exponential_trapezoid";
}

namespace {

void check_steps(int steps) {
  if (steps < 1) throw DomainError("steps must be >= 1");
}

}  // namespace

MultiFactorRiccatiSolver::MultiFactorRiccatiSolver(MultiFactorKernel kernel, ModelParams params, int steps,
                                                   MultiFactorScheme scheme)
    : kernel_(std::move(kernel)), params_(std::move(params)), steps_(steps), scheme_(scheme) {
  params_.validate();
  check_steps(steps);
  const double dt = params_.horizon / steps;
  const std::size_t n = kernel_.size();
  decay_.resize(n);
  phi1_.resize(n);
  phi2_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = kernel_.rates()[i];
    const double x = g * dt;
    decay_[i] = std::exp(-x);
    phi1_[i] = -std::expm1(-x) / g;
    if (x < 1e-2) {
      phi2_[i] = dt * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x * x * x * x / 720.0);
    } else {
      // φ1 - (1 - e^{-x}(1 + x)) / (γ² Δ)
      phi2_[i] = phi1_[i] - (-std::expm1(-x) - x * std::exp(-x)) / (g * x);
    }
  }
}

RiccatiSolution MultiFactorRiccatiSolver::solve(cplx z, bool keep_factor_states) const {
  check_strip(z);
  const std::size_t n = kernel_.size();
  const auto& c = kernel_.weights();

  RiccatiSolution sol;
  sol.z = z;
  sol.horizon = params_.horizon;
  sol.psi.assign(static_cast<std::size_t>(steps_) + 1, cplx(0.0));
  if (keep_factor_states) sol.factor_states.assign(n, std::vector<cplx>(sol.psi.size(), cplx(0.0)));

  std::vector<cplx> state(n, cplx(0.0));
  const bool trapezoid = scheme_ == MultiFactorScheme::exponential_trapezoid;

  double c_phi1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) c_phi1 += c[i] * phi1_[i];

  for (int k = 0; k < steps_; ++k) {
    const cplx f_now = riccati_rhs(z, sol.psi[static_cast<std::size_t>(k)], params_);
    cplx slope(0.0);
    if (trapezoid) {
      // Predictor: Σ c_i (e^{-γΔ} ψ^i + φ1 F_k).
      cplx predicted = c_phi1 * f_now;
      for (std::size_t i = 0; i < n; ++i) predicted += c[i] * decay_[i] * state[i];
      slope = riccati_rhs(z, predicted, params_) - f_now;
    }
    cplx total(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = decay_[i] * state[i] + phi1_[i] * f_now;
      if (trapezoid) state[i] += phi2_[i] * slope;
      total += c[i] * state[i];
      if (keep_factor_states) sol.factor_states[i][static_cast<std::size_t>(k) + 1] = state[i];
    }
    sol.psi[static_cast<std::size_t>(k) + 1] = total;
  }
  return sol;
}

AdamsRiccatiSolver::AdamsRiccatiSolver(ModelParams params, int steps)
    : params_(std::move(params)), steps_(steps) {
  params_.validate();
  check_steps(steps);
  const double alpha = params_.alpha();
  const double dt = params_.horizon / steps;
  const double pred_scale = std::pow(dt, alpha) / std::tgamma(alpha + 1.0);
  const double corr_scale = std::pow(dt, alpha) / std::tgamma(alpha + 2.0);

  const std::size_t size = static_cast<std::size_t>(steps) + 1;
  predictor_.assign(size, 0.0);
  corrector_.assign(size, 0.0);
  corrector_first_.assign(size, 0.0);
  for (std::size_t m = 1; m < size; ++m) {
    const double md = static_cast<double>(m);
    predictor_[m] = pred_scale * (std::pow(md, alpha) - std::pow(md - 1.0, alpha));
    corrector_[m] = corr_scale * (std::pow(md + 1.0, alpha + 1.0) + std::pow(md - 1.0, alpha + 1.0) -
                                  2.0 * std::pow(md, alpha + 1.0));
  }
  for (std::size_t k = 0; k < size; ++k) {
    const double kd = static_cast<double>(k);
    corrector_first_[k] = corr_scale * (std::pow(kd, alpha + 1.0) - (kd - alpha) * std::pow(kd + 1.0, alpha));
  }
  corrector_diag_ = corr_scale;
}

RiccatiSolution AdamsRiccatiSolver::solve(cplx z) const {
  check_strip(z);
  RiccatiSolution sol;
  sol.z = z;
  sol.horizon = params_.horizon;
  const std::size_t size = static_cast<std::size_t>(steps_) + 1;
  sol.psi.assign(size, cplx(0.0));
  std::vector<cplx> f(size, cplx(0.0));
  f[0] = riccati_rhs(z, cplx(0.0), params_);

  for (std::size_t k = 0; k + 1 < size; ++k) {
    // Lags m = k + 1 - j.
    cplx predicted(0.0);
    cplx corrected = corrector_first_[k] * f[0];
    for (std::size_t j = 0; j <= k; ++j) predicted += predictor_[k + 1 - j] * f[j];
    for (std::size_t j = 1; j <= k; ++j) corrected += corrector_[k + 1 - j] * f[j];
    corrected += corrector_diag_ * riccati_rhs(z, predicted, params_);
    sol.psi[k + 1] = corrected;
    f[k + 1] = riccati_rhs(z, corrected, params_);
  }
  return sol;
}

RiccatiSolution solve_multifactor_riccati(const MultiFactorKernel& kernel, const ModelParams& params, cplx z,
                                          int steps, MultiFactorScheme scheme, bool keep_factor_states) {
  check_strip(z);
  return MultiFactorRiccatiSolver(kernel, params, steps, scheme).solve(z, keep_factor_states);
}

RiccatiSolution solve_fractional_riccati_adams(const ModelParams& params, cplx z, int steps) {
  check_strip(z);
  return AdamsRiccatiSolver(params, steps).solve(z);
}

GVariant parse_g_variant(std::string_view name) {
  if (name == "standard") return GVariant::standard;
  if (name == "shifted") return GVariant::shifted;
  throw ConfigError("unknown g variant '" + std::string(name) + "'");
}

CharFnForm parse_form(std::string_view name) {
  if (name == "F_form" || name == "F") return CharFnForm::F_form;
  if (name == "psi_form" || name == "psi") return CharFnForm::psi_form;
  throw ConfigError("unknown characteristic-function form '" + std::string(name) + "'");
}

namespace {

void check_g_time(const ModelParams& params, double t) {
  if (!(t >= 0.0 && t <= params.horizon * (1.0 + 1e-12))) throw DomainError("g_curve: t must lie in [0, T]");
}

// ∫_0^t K(t-s) θ(s) ds for a kernel exposing integral(a, b).
template <class Kernel>
double theta_convolution(const ModelParams& params, const Kernel& kernel, double t) {
  double sum = 0.0;
  params.theta.for_each_piece(t, [&](double a, double b, double theta) {
    if (theta != 0.0) sum += theta * kernel.integral(t - b, t - a);
  });
  return sum;
}

void check_kernel_matches(const ModelParams& params, const FractionalKernel& kernel) {
  if (kernel.hurst() != params.hurst) throw ValidationError("fractional kernel and model disagree on hurst");
}

}  // namespace

double g_curve(const ModelParams& params, const FractionalKernel& kernel, GVariant variant, double t) {
  params.validate();
  check_g_time(params, t);
  check_kernel_matches(params, kernel);
  // ∫_0^t K(t-s) s^{-H-1/2}/Γ(1/2-H) ds = 1 for t > 0 (Beta integral).
  const double base = (variant == GVariant::shifted && t == 0.0) ? 0.0 : params.v0;
  return base + theta_convolution(params, kernel, t);
}

double g_curve(const ModelParams& params, const MultiFactorKernel& kernel, GVariant variant, double t) {
  params.validate();
  check_g_time(params, t);
  double base = params.v0;
  if (variant == GVariant::shifted) {
    // ∫_0^t e^{-γ(t-s)} s^{p-1}/Γ(p) ds = t^p E_{1,p+1}(-γt), p = 1/2 - H.
    const double p = 0.5 - params.hurst;
    base = 0.0;
    if (t > 0.0 && params.v0 != 0.0) {
      const double tp = std::pow(t, p);
      for (std::size_t i = 0; i < kernel.size(); ++i) {
        base += kernel.weights()[i] * tp * mittag_leffler(1.0, p + 1.0, -kernel.rates()[i] * t);
      }
      base *= params.v0;
    }
  }
  return base + theta_convolution(params, kernel, t);
}

double g_curve(const ModelParams& params, const KernelChoice& kernel, GVariant variant, double t) {
  return std::visit([&](const auto& k) { return g_curve(params, k, variant, t); }, kernel);
}

namespace {

// ∫_a^b of the piecewise-linear interpolant of u(s) = values[m - j] at s = jΔ,
// i.e. of ψ(T - s) on the solver grid, for 0 ≤ a ≤ b ≤ T.
cplx reversed_linear_integral(const std::vector<cplx>& values, double dt, double a, double b) {
  const int m = static_cast<int>(values.size()) - 1;
  auto at = [&](double s) {
    const double pos = std::clamp(s / dt, 0.0, static_cast<double>(m));
    const int j = std::min(static_cast<int>(pos), m - 1);
    const double w = pos - j;
    return (1.0 - w) * values[static_cast<std::size_t>(m - j)] + w * values[static_cast<std::size_t>(m - j - 1)];
  };
  if (b <= a) return cplx(0.0);
  const int first = std::clamp(static_cast<int>(std::floor(a / dt)), 0, m - 1);
  const int last = std::clamp(static_cast<int>(std::ceil(b / dt)) - 1, first, m - 1);
  cplx sum(0.0);
  for (int cell = first; cell <= last; ++cell) {
    const double left = std::max(a, cell * dt);
    const double right = std::min(b, (cell + 1) * dt);
    if (right > left) sum += 0.5 * (right - left) * (at(left) + at(right));
  }
  return sum;
}

}  // namespace

namespace {

// g on the F-form quadrature nodes. For the fractional kernel the shifted
// curve equals the standard one on (0, T]; the standard curve is its
// continuous extension at s = 0.
double g_quadrature_node(const ModelParams& params, const KernelChoice& kernel, GVariant variant, double s) {
  if (std::holds_alternative<FractionalKernel>(kernel)) variant = GVariant::standard;
  return g_curve(params, kernel, variant, s);
}

// Removes the leading trapezoid error ζ(-α) c Δ^{1+α} of the u^α endpoint
// terms (generalised Euler-Maclaurin) for the fractional kernel, where
// ψ(u) = F(z, 0) u^α/Γ(α+1) + O(u^{2α}) and the θ part of g grows like s^α.
//
// For a multi-factor kernel only the shifted curve of the F form is singular:
// g^n(s) = V0 K^n(0) s^p/Γ(p+1) + O(s), p = 1/2 - H.
cplx endpoint_correction(const RiccatiSolution& sol, const ModelParams& params, const KernelChoice& kernel,
                         const CharFnOptions& options) {
  if (const auto* multi = std::get_if<MultiFactorKernel>(&kernel)) {
    if (options.form != CharFnForm::F_form || options.g_variant != GVariant::shifted || params.v0 == 0.0 ||
        params.classical_mode) {
      return cplx(0.0);
    }
    const double p = 0.5 - params.hurst;
    const double scale = boost::math::zeta(-p) * std::pow(sol.dt(), 1.0 + p) / std::tgamma(p + 1.0);
    return -scale * riccati_rhs(sol.z, sol.terminal(), params) * params.v0 * (*multi)(0.0);
  }
  const auto* frac = std::get_if<FractionalKernel>(&kernel);
  if (!frac || frac->classical()) return cplx(0.0);
  const double alpha = params.alpha();
  const double horizon = sol.horizon;
  const double scale = boost::math::zeta(-alpha) * std::pow(sol.dt(), 1.0 + alpha) / std::tgamma(alpha + 1.0);
  const cplx f0 = riccati_rhs(sol.z, cplx(0.0), params);
  const cplx slope0 = params.rho * params.nu * sol.z - params.lambda;  // ∂F/∂x at x = 0

  double theta_first = 0.0;
  double theta_last = 0.0;
  bool first = true;
  params.theta.for_each_piece(horizon, [&](double, double, double theta) {
    if (first) theta_first = theta;
    first = false;
    theta_last = theta;
  });

  cplx coefficient(0.0);
  if (options.form == CharFnForm::F_form) {
    coefficient = slope0 * f0 * g_quadrature_node(params, kernel, options.g_variant, horizon) +
                  riccati_rhs(sol.z, sol.terminal(), params) * theta_first;
  } else {
    const double p = 0.5 - params.hurst;
    coefficient = f0 * (theta_last + params.v0 * std::pow(horizon, p - 1.0) / std::tgamma(p));
  }
  return -scale * coefficient;
}

}  // namespace

cplx char_exponent(const RiccatiSolution& sol, const ModelParams& params, const KernelChoice& kernel,
                   const CharFnOptions& options) {
  const int m = sol.steps();
  const double dt = sol.dt();
  const double horizon = sol.horizon;

  if (options.form == CharFnForm::F_form) {
    cplx sum(0.0);
    for (int j = 0; j <= m; ++j) {
      const double s = horizon * j / m;
      const double weight = (j == 0 || j == m) ? 0.5 * dt : dt;
      const cplx f = riccati_rhs(sol.z, sol.psi[static_cast<std::size_t>(m - j)], params);
      sum += weight * f * g_quadrature_node(params, kernel, options.g_variant, s);
    }
    return sum + endpoint_correction(sol, params, kernel, options);
  }

  // ψ form: θ part on the linear interpolant, V0 s^{-β}/Γ(1-β) part by
  // product integration of the linear interpolant against s^{-β}.
  cplx sum(0.0);
  params.theta.for_each_piece(horizon, [&](double a, double b, double theta) {
    if (theta != 0.0) sum += theta * reversed_linear_integral(sol.psi, dt, a, b);
  });
  if (params.v0 != 0.0) {
    const double p = 0.5 - params.hurst;  // 1 - β
    cplx singular(0.0);
    for (int j = 0; j < m; ++j) {
      const double s0 = dt * j;
      const double s1 = dt * (j + 1);
      const double i0 = (std::pow(s1, p) - std::pow(s0, p)) / p;                  // ∫ s^{-β}
      const double i1 = (std::pow(s1, p + 1.0) - std::pow(s0, p + 1.0)) / (p + 1.0);  // ∫ s^{1-β}
      const double w_left = (s1 * i0 - i1) / dt;
      const double w_right = (i1 - s0 * i0) / dt;
      singular += w_left * sol.psi[static_cast<std::size_t>(m - j)] +
                  w_right * sol.psi[static_cast<std::size_t>(m - j - 1)];
    }
    sum += params.v0 / std::tgamma(p) * singular;
  }
  return sum + endpoint_correction(sol, params, kernel, options);
}

namespace {

constexpr int kMaxStepDoublings = 5;

// Re ψ ≤ 0 holds on the whole strip; explicit schemes that lose stability for
// large |Im z| violate it (or overflow) long before they lose accuracy elsewhere.
bool looks_stable(const RiccatiSolution& sol) {
  for (const cplx& v : sol.psi) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    if (v.real() > 1e-8 * std::max(1.0, std::abs(v))) return false;
  }
  return true;
}

// Solver bound to one kernel choice; shared read-only across z values.
class BoundSolver {
 public:
  BoundSolver(const ModelParams& params, const KernelChoice& kernel, int steps, MultiFactorScheme scheme)
      : params_(params), kernel_(kernel), steps_(steps), scheme_(scheme) {
    if (const auto* frac = std::get_if<FractionalKernel>(&kernel)) {
      check_kernel_matches(params, *frac);
      adams_.emplace(params, steps);
    } else {
      multi_.emplace(std::get<MultiFactorKernel>(kernel), params, steps, scheme);
    }
  }

  // Solution on the requested grid, or on a grid refined by doubling when the
  // requested one is unstable for this z.
  RiccatiSolution solve(cplx z) const {
    RiccatiSolution sol = adams_ ? adams_->solve(z) : multi_->solve(z);
    for (int doubling = 1; !looks_stable(sol); ++doubling) {
      if (doubling > kMaxStepDoublings) {
        std::ostringstream os;
        os << "Riccati solver unstable at z = " << z << " up to " << sol.steps() << " steps";
        throw NumericalError(os.str());
      }
      const int steps = steps_ << doubling;
      sol = adams_ ? AdamsRiccatiSolver(params_, steps).solve(z)
                   : MultiFactorRiccatiSolver(std::get<MultiFactorKernel>(kernel_), params_, steps, scheme_).solve(z);
    }
    return sol;
  }

 private:
  const ModelParams& params_;
  const KernelChoice& kernel_;
  int steps_;
  MultiFactorScheme scheme_;
  std::optional<AdamsRiccatiSolver> adams_;
  std::optional<MultiFactorRiccatiSolver> multi_;
};

}  // namespace

cplx char_fn(const ModelParams& params, const KernelChoice& kernel, cplx z, int steps,
             const CharFnOptions& options) {
  check_strip(z);
  const BoundSolver solver(params, kernel, steps, options.scheme);
  return std::exp(char_exponent(solver.solve(z), params, kernel, options));
}

std::vector<cplx> char_fn_batch(const ModelParams& params, const KernelChoice& kernel, std::span<const cplx> zs,
                                int steps, const CharFnOptions& options, unsigned threads) {
  for (cplx z : zs) check_strip(z);
  const BoundSolver solver(params, kernel, steps, options.scheme);

  // g on the grid is shared by every z in the F form.
  std::vector<double> g_grid;
  if (options.form == CharFnForm::F_form) {
    g_grid.resize(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) {
      g_grid[static_cast<std::size_t>(j)] = g_quadrature_node(params, kernel, options.g_variant, params.horizon * j / steps);
    }
  }

  std::vector<cplx> out(zs.size());
  auto work = [&](std::size_t index) {
    const RiccatiSolution sol = solver.solve(zs[index]);
    if (options.form == CharFnForm::F_form && sol.steps() == steps) {
      const double dt = sol.dt();
      cplx sum(0.0);
      for (int j = 0; j <= steps; ++j) {
        const double weight = (j == 0 || j == steps) ? 0.5 * dt : dt;
        sum += weight * riccati_rhs(sol.z, sol.psi[static_cast<std::size_t>(steps - j)], params) *
               g_grid[static_cast<std::size_t>(j)];
      }
      out[index] = std::exp(sum + endpoint_correction(sol, params, kernel, options));
    } else {
      out[index] = std::exp(char_exponent(sol, params, kernel, options));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(zs.size(), 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < zs.size(); ++i) work(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < zs.size(); i += threads) work(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace roughmf
