#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roughmf/kernel.hpp"
#include "roughmf/model.hpp"

namespace roughmf {

using cplx = std::complex<double>;

/// F(z, x) = (z² - z)/2 + (ρνz - λ) x + ν²x²/2.
cplx riccati_rhs(cplx z, cplx x, const ModelParams& params);

/// Either kernel the solvers and curves accept.
using KernelChoice = std::variant<FractionalKernel, MultiFactorKernel>;

/// ψ(·, z) on the uniform grid t_j = j T / steps.
struct RiccatiSolution {
  cplx z;
  double horizon = 0.0;
  std::vector<cplx> psi;  // steps + 1 values, psi[0] = 0
  // Optional ψ^{n,i}: factor_states[i][j]. Empty unless requested.
  std::vector<std::vector<cplx>> factor_states;

  int steps() const { return static_cast<int>(psi.size()) - 1; }
  double dt() const { return horizon / steps(); }
  double t(int j) const { return horizon * j / steps(); }
  cplx terminal() const { return psi.back(); }
};

enum class MultiFactorScheme {
  // F frozen at the left node, exact propagator for -γ_i ψ^{n,i}.
  exponential_euler,
  // Exponential-Euler predictor, then F interpolated linearly over the step.
  exponential_trapezoid,
};

MultiFactorScheme parse_scheme(std::string_view name);
std::string to_string(MultiFactorScheme scheme);

/// Reusable stepper for the n-dimensional Riccati system
///   ∂_t ψ^{n,i} = -γ_i ψ^{n,i} + F(z, Σ_j c_j ψ^{n,j}),  ψ^{n,i}(0) = 0.
/// Propagator coefficients are computed once and shared across z values.
class MultiFactorRiccatiSolver {
 public:
  MultiFactorRiccatiSolver(MultiFactorKernel kernel, ModelParams params, int steps,
                           MultiFactorScheme scheme = MultiFactorScheme::exponential_trapezoid);

  RiccatiSolution solve(cplx z, bool keep_factor_states = false) const;

  const MultiFactorKernel& kernel() const { return kernel_; }
  const ModelParams& params() const { return params_; }
  int steps() const { return steps_; }

 private:
  MultiFactorKernel kernel_;
  ModelParams params_;
  int steps_;
  MultiFactorScheme scheme_;
  std::vector<double> decay_;  // e^{-γΔ}
  std::vector<double> phi1_;   // ∫_0^Δ e^{-γ(Δ-s)} ds
  std::vector<double> phi2_;   // ∫_0^Δ e^{-γ(Δ-s)} s/Δ ds
};

/// Fractional Adams predictor-corrector (one correction per step) for
///   ψ(t) = ∫_0^t K(t-s) F(z, ψ(s)) ds,  K(t) = t^{α-1}/Γ(α).
/// Weights depend only on the lag and are computed once; cost O(steps²) per z.
class AdamsRiccatiSolver {
 public:
  AdamsRiccatiSolver(ModelParams params, int steps);

  RiccatiSolution solve(cplx z) const;

  const ModelParams& params() const { return params_; }
  int steps() const { return steps_; }

 private:
  ModelParams params_;
  int steps_;
  std::vector<double> predictor_;  // b_m, lag m = k + 1 - j ≥ 1
  std::vector<double> corrector_;  // a_m for interior lags, m = k + 1 - j ≥ 1
  std::vector<double> corrector_first_;  // a_{0,k+1} indexed by k
  double corrector_diag_;
};

RiccatiSolution solve_multifactor_riccati(
    const MultiFactorKernel& kernel, const ModelParams& params, cplx z, int steps,
    MultiFactorScheme scheme = MultiFactorScheme::exponential_trapezoid,
    bool keep_factor_states = false);

RiccatiSolution solve_fractional_riccati_adams(const ModelParams& params, cplx z, int steps);

/// Throws DomainError unless Re z ∈ [0, 1].
void check_strip(cplx z);

enum class GVariant {
  standard,  // V0 + ∫_0^t K(t-s) θ(s) ds
  shifted,   // ∫_0^t K(t-s) (V0 s^{-H-1/2}/Γ(1/2-H) + θ(s)) ds
};

GVariant parse_g_variant(std::string_view name);

double g_curve(const ModelParams& params, const FractionalKernel& kernel, GVariant variant, double t);
double g_curve(const ModelParams& params, const MultiFactorKernel& kernel, GVariant variant, double t);
double g_curve(const ModelParams& params, const KernelChoice& kernel, GVariant variant, double t);

enum class CharFnForm {
  F_form,    // exp(∫_0^T F(z, ψ(T-s)) g(s) ds)
  psi_form,  // exp(∫_0^T ψ(T-s) (V0 s^{-H-1/2}/Γ(1/2-H) + θ(s)) ds)
};

CharFnForm parse_form(std::string_view name);

struct CharFnOptions {
  CharFnForm form = CharFnForm::F_form;
  // Input curve of the F form. The ψ form always corresponds to `shifted`.
  GVariant g_variant = GVariant::standard;
  MultiFactorScheme scheme = MultiFactorScheme::exponential_trapezoid;
};

/// Exponent ∫ … ds of the characteristic function for a solved ψ.
cplx char_exponent(const RiccatiSolution& solution, const ModelParams& params,
                   const KernelChoice& kernel, const CharFnOptions& options);

/// L(T, z) = E[exp(z log(S_T/S_0))] with T = params.horizon.
///
/// `steps` is the Riccati grid size. Where the explicit solver is unstable for
/// this z (non-finite values or Re ψ > 0) the grid is doubled, at most five
/// times, before NumericalError is raised.
cplx char_fn(const ModelParams& params, const KernelChoice& kernel, cplx z, int steps,
             const CharFnOptions& options = {});

/// Characteristic function at many z values. Solver coefficients are built
/// once; z values are distributed over `threads` workers (0 = hardware).
/// The output does not depend on the thread count.
std::vector<cplx> char_fn_batch(const ModelParams& params, const KernelChoice& kernel,
                                std::span<const cplx> zs, int steps,
                                const CharFnOptions& options = {}, unsigned threads = 1);

}  // namespace roughmf
