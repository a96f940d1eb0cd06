#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roughmf/errors.hpp"
#include "roughmf/kernel.hpp"
#include "roughmf/model.hpp"
#include "roughmf/montecarlo.hpp"
#include "roughmf/partition_optimizer.hpp"
#include "roughmf/pricing.hpp"
#include "roughmf/riccati.hpp"
#include "roughmf/special_functions.hpp"

namespace py = pybind11;
using namespace roughmf;

namespace {

ModelParams make_params(double lambda, double rho, double nu, double hurst, double v0, py::object theta,
                        double s0, double horizon, bool classical_mode) {
  ModelParams p;
  p.lambda = lambda;
  p.rho = rho;
  p.nu = nu;
  p.hurst = hurst;
  p.v0 = v0;
  if (py::isinstance<ThetaCurve>(theta)) {
    p.theta = theta.cast<ThetaCurve>();
  } else {
    p.theta = ThetaCurve(theta.cast<double>());
  }
  p.s0 = s0;
  p.horizon = horizon;
  p.classical_mode = classical_mode;
  p.validate();
  return p;
}

CharFnOptions make_options(const std::string& form, const std::string& g_variant, const std::string& scheme) {
  CharFnOptions o;
  o.form = parse_form(form);
  o.g_variant = parse_g_variant(g_variant);
  o.scheme = parse_scheme(scheme);
  return o;
}

// Either kernel class, as the solvers expect it.
KernelChoice to_kernel(const py::object& kernel) {
  if (py::isinstance<FractionalKernel>(kernel)) return kernel.cast<FractionalKernel>();
  if (py::isinstance<MultiFactorKernel>(kernel)) return kernel.cast<MultiFactorKernel>();
  throw py::type_error("kernel must be a FractionalKernel or a MultiFactorKernel");
}

IntegrationConfig make_integration(double b_max, int nodes) {
  IntegrationConfig c;
  c.b_max = b_max;
  c.nodes = nodes;
  return c;
}

}  // namespace

PYBIND11_MODULE(_roughmf, m) {
  m.doc() = "Multi-factor Markovian approximation of the rough Heston model";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<ThetaCurve>(m, "ThetaCurve")
      .def(py::init<double>(), py::arg("constant"))
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("starts"), py::arg("values"))
      .def("__call__", &ThetaCurve::operator())
      .def_property_readonly("starts", &ThetaCurve::starts)
      .def_property_readonly("values", &ThetaCurve::values);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&make_params), py::arg("lambda_") = 0.3, py::arg("rho") = -0.7, py::arg("nu") = 0.3,
           py::arg("hurst") = 0.1, py::arg("v0") = 0.02, py::arg("theta") = py::float_(0.02),
           py::arg("s0") = 1.0, py::arg("horizon") = 1.0, py::arg("classical_mode") = false)
      .def_readwrite("lambda_", &ModelParams::lambda)
      .def_readwrite("rho", &ModelParams::rho)
      .def_readwrite("nu", &ModelParams::nu)
      .def_readwrite("hurst", &ModelParams::hurst)
      .def_readwrite("v0", &ModelParams::v0)
      .def_readwrite("theta", &ModelParams::theta)
      .def_readwrite("s0", &ModelParams::s0)
      .def_readwrite("horizon", &ModelParams::horizon)
      .def_readwrite("classical_mode", &ModelParams::classical_mode)
      .def("validate", &ModelParams::validate);

  // Special functions.
  m.def("gamma", &gamma_eval, py::arg("x"));
  m.def("gamma_p", &gamma_p, py::arg("a"), py::arg("x"));
  m.def("mittag_leffler", py::overload_cast<double, double, double>(&mittag_leffler), py::arg("alpha"),
        py::arg("beta"), py::arg("x"));
  m.def("frac_resolvent", &frac_resolvent, py::arg("alpha"), py::arg("lambda_"), py::arg("t"));
  m.def("forward_variance", &forward_variance, py::arg("params"), py::arg("t"));
  m.def("integrated_forward_variance", &integrated_forward_variance, py::arg("params"), py::arg("t"));

  // Kernels.
  py::class_<FractionalKernel>(m, "FractionalKernel")
      .def(py::init<double, bool>(), py::arg("hurst"), py::arg("classical") = false)
      .def("__call__", &FractionalKernel::operator())
      .def_property_readonly("hurst", &FractionalKernel::hurst);

  py::class_<Partition>(m, "Partition")
      .def(py::init<std::vector<double>>(), py::arg("etas"))
      .def_property_readonly("etas", &Partition::etas)
      .def("__len__", &Partition::size);

  py::class_<MultiFactorKernel>(m, "MultiFactorKernel")
      .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("weights"), py::arg("rates"),
           py::arg("hurst") = 0.0)
      .def("__call__", &MultiFactorKernel::operator())
      .def("__len__", &MultiFactorKernel::size)
      .def_property_readonly("weights", &MultiFactorKernel::weights)
      .def_property_readonly("rates", &MultiFactorKernel::rates)
      .def_property_readonly("hurst", &MultiFactorKernel::hurst);

  m.def("mu_density", &mu_density, py::arg("hurst"), py::arg("gamma"));
  m.def("cell_variance", &cell_variance, py::arg("hurst"), py::arg("a"), py::arg("b"));
  m.def("weights_from_partition", &weights_from_partition, py::arg("hurst"), py::arg("partition"));
  m.def("uniform_partition", &uniform_partition, py::arg("n"), py::arg("step"));
  m.def("optimal_step", &optimal_step, py::arg("n"), py::arg("horizon"), py::arg("hurst"));
  m.def("l2_error", &l2_error, py::arg("kernel"), py::arg("hurst"), py::arg("horizon"));
  m.def("l1_error", &l1_error, py::arg("kernel"), py::arg("hurst"), py::arg("horizon"));
  m.def("f2_bound", &f2_bound, py::arg("hurst"), py::arg("horizon"), py::arg("partition"));
  m.def("f1_bound", &f1_bound, py::arg("hurst"), py::arg("horizon"), py::arg("partition"));
  m.def(
      "optimize_partition",
      [](int n, double hurst, double horizon, const std::string& objective) {
        const OptimizeResult r = optimize_partition(n, hurst, horizon, parse_objective(objective));
        return py::make_tuple(r.partition, r.objective_value);
      },
      py::arg("n"), py::arg("hurst"), py::arg("horizon"), py::arg("objective") = "f2",
      "Returns (partition, objective value).");
  m.def(
      "build_kernel",
      [](const std::string& choice, int n, double hurst, double horizon) {
        BuiltKernel b = build_kernel(parse_factor_choice(choice), n, hurst, horizon);
        return py::make_tuple(b.kernel, b.partition);
      },
      py::arg("choice"), py::arg("n"), py::arg("hurst"), py::arg("horizon"),
      "choice is uniform_optimal, f2_opt or f1_opt. Returns (kernel, partition).");

  // Riccati and characteristic function.
  m.def(
      "solve_multifactor_riccati",
      [](const MultiFactorKernel& k, const ModelParams& p, cplx z, int steps, const std::string& scheme) {
        return solve_multifactor_riccati(k, p, z, steps, parse_scheme(scheme)).psi;
      },
      py::arg("kernel"), py::arg("params"), py::arg("z"), py::arg("steps"),
      py::arg("scheme") = "exponential_trapezoid", "psi on the uniform grid, steps + 1 values.");
  m.def(
      "solve_fractional_riccati",
      [](const ModelParams& p, cplx z, int steps) { return solve_fractional_riccati_adams(p, z, steps).psi; },
      py::arg("params"), py::arg("z"), py::arg("steps"));

  const auto char_fn_py = [](const ModelParams& p, const py::object& k, cplx z, int steps, const std::string& form,
                             const std::string& g_variant, const std::string& scheme) {
    return char_fn(p, to_kernel(k), z, steps, make_options(form, g_variant, scheme));
  };
  m.def("char_fn", char_fn_py, py::arg("params"), py::arg("kernel"), py::arg("z"), py::arg("steps") = 200,
        py::arg("form") = "F_form", py::arg("g_variant") = "standard", py::arg("scheme") = "exponential_trapezoid");

  // Pricing.
  m.def("bs_call_price", &bs_call_price, py::arg("s0"), py::arg("k"), py::arg("total_vol"));
  m.def("implied_vol", &implied_vol, py::arg("price"), py::arg("s0"), py::arg("k"), py::arg("maturity"));
  m.def(
      "lewis_call_price",
      [](const CharFnHandle& f, double k, double maturity, double s0, double b_max, int nodes) {
        return lewis_call_price(f, k, maturity, s0, make_integration(b_max, nodes));
      },
      py::arg("char_fn"), py::arg("k"), py::arg("maturity"), py::arg("s0") = 1.0, py::arg("b_max") = 200.0,
      py::arg("nodes") = 2000);
  m.def(
      "smile",
      [](const ModelParams& p, const py::object& k, std::vector<double> k_grid, double maturity, int steps,
         double b_max, int nodes, const std::string& form, unsigned threads) {
        const Smile s = smile(p, to_kernel(k), k_grid, maturity, steps, make_integration(b_max, nodes),
                              make_options(form, "standard", "exponential_trapezoid"), threads);
        std::vector<double> prices, vols;
        for (const auto& pt : s.points) {
          prices.push_back(pt.price);
          vols.push_back(pt.implied_vol);
        }
        return py::make_tuple(prices, vols);
      },
      py::arg("params"), py::arg("kernel"), py::arg("k_grid"), py::arg("maturity"), py::arg("steps") = 200,
      py::arg("b_max") = 200.0, py::arg("nodes") = 2000, py::arg("form") = "F_form", py::arg("threads") = 1,
      "Returns (prices, implied vols); a vol is NaN where the price left the no-arbitrage interval.");

  // Monte Carlo.
  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("terminal_spots", &SimulationResult::terminal_spots)
      .def_readonly("realized_variance", &SimulationResult::realized_variance)
      .def_readonly("terminal_variance", &SimulationResult::terminal_variance)
      .def_readonly("negative_fraction", &SimulationResult::negative_fraction);

  m.def(
      "simulate",
      [](const ModelParams& p, std::optional<MultiFactorKernel> kernel, int n_paths, int steps, std::uint64_t seed,
         bool antithetic, unsigned threads) {
        SimulationConfig c;
        c.n_paths = n_paths;
        c.steps = steps;
        c.seed = seed;
        c.antithetic = antithetic;
        c.threads = threads;
        py::gil_scoped_release release;
        if (kernel) return simulate_multifactor(p, *kernel, c);
        c.scheme = SimulationScheme::volterra_oracle;
        return simulate_volterra_oracle(p, c);
      },
      py::arg("params"), py::arg("kernel") = py::none(), py::arg("n_paths") = 10000, py::arg("steps") = 200,
      py::arg("seed") = 20180101, py::arg("antithetic") = false, py::arg("threads") = 1,
      "Multi-factor scheme for a kernel, the Volterra scheme when kernel is None.");
  m.def(
      "mc_call_price",
      [](const SimulationResult& r, double k, double s0, bool antithetic) {
        const McPrice p = mc_call_price(r, k, s0, antithetic);
        return py::make_tuple(p.price, p.std_error);
      },
      py::arg("result"), py::arg("k"), py::arg("s0") = 1.0, py::arg("antithetic") = false,
      "Returns (price, standard error).");
}
