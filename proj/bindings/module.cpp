#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "solitonlab/scattering.hpp"
#include "solitonlab/scenario.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/splitstep.hpp"
#include "solitonlab/verify.hpp"

namespace py = pybind11;
using namespace solitonlab;

namespace {

SolitonData make_data(const std::vector<std::tuple<Cx, Cx, Cx>>& raw) {
  SolitonData data;
  for (const auto& [k, c, d] : raw) data.push_back(SpectralDatum{k, c, d});
  validate_spectral(data);
  return data;
}

// Shared scattering geometry resolution: L = 0 and n_steps = 0 mean "derive
// from the data", matching the CLI defaults.
std::pair<double, std::size_t> resolve_geometry(const SolitonData& data, double t,
                                                double kmax, double L,
                                                std::size_t n_steps) {
  const FieldSampler f = soliton_sampler(data);
  if (L <= 0.0) L = auto_half_width(f, t);
  if (n_steps == 0) n_steps = auto_steps(L, kmax);
  return {L, n_steps};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact N-soliton solutions of the mixed (focusing-defocusing) coupled "
      "NLS system, with PDE, Lax-pair and scattering verification oracles.";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "SolitonlabError", PyExc_RuntimeError);

  py::class_<SpectralDatum>(m, "SpectralDatum")
      .def(py::init<Cx, Cx, Cx>(), py::arg("k"), py::arg("c"), py::arg("d"))
      .def_readwrite("k", &SpectralDatum::k)
      .def_readwrite("c", &SpectralDatum::c)
      .def_readwrite("d", &SpectralDatum::d)
      .def("__repr__", [](const SpectralDatum& s) {
        return "SpectralDatum(k=(" + std::to_string(s.k.real()) + "+" +
               std::to_string(s.k.imag()) + "j), ...)";
      });

  m.def("theta", &theta, py::arg("datum"), py::arg("x"), py::arg("t"),
        "Phase exponent -i k x - i k^2 t of one spectral datum.");

  m.def(
      "eval_fields",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double x, double t) {
        const FieldSample s = eval_fields(make_data(raw), x, t);
        return py::make_tuple(s.q1, s.q2, s.singular);
      },
      py::arg("data"), py::arg("x"), py::arg("t"),
      "Evaluate (q1, q2, singular) at one point from [(k, c, d), ...].");

  m.def(
      "one_soliton",
      [](Cx k, Cx c, Cx d, double x, double t) {
        const FieldSample s = one_soliton_closed(SpectralDatum{k, c, d}, x, t);
        return py::make_tuple(s.q1, s.q2);
      },
      py::arg("k"), py::arg("c"), py::arg("d"), py::arg("x"), py::arg("t"),
      "Closed-form one-soliton fields; raises on a pole.");

  m.def(
      "eval_grid",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double x0, double x1,
         std::size_t nx, double t0, double t1, std::size_t nt) {
        const FieldGrid g =
            eval_grid(make_data(raw), uniform_grid(x0, x1, nx), uniform_grid(t0, t1, nt));
        py::array_t<Cx> q1({nt, nx}), q2({nt, nx});
        py::array_t<bool> sing({nt, nx});
        auto a1 = q1.mutable_unchecked<2>();
        auto a2 = q2.mutable_unchecked<2>();
        auto as = sing.mutable_unchecked<2>();
        for (std::size_t ti = 0; ti < nt; ++ti)
          for (std::size_t xi = 0; xi < nx; ++xi) {
            const FieldSample& s = g.at(ti, xi);
            a1(ti, xi) = s.q1;
            a2(ti, xi) = s.q2;
            as(ti, xi) = s.singular;
          }
        return py::make_tuple(q1, q2, sing);
      },
      py::arg("data"), py::arg("x0"), py::arg("x1"), py::arg("nx"),
      py::arg("t0"), py::arg("t1"), py::arg("nt"),
      "Evaluate on a grid; returns (q1[nt,nx], q2[nt,nx], singular[nt,nx]).");

  m.def(
      "pde_residual",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double x, double t,
         double h) {
        const auto [r1, r2] =
            pde_residual(soliton_sampler(make_data(raw)), x, t, h, h);
        return py::make_tuple(r1, r2);
      },
      py::arg("data"), py::arg("x"), py::arg("t"), py::arg("h") = 0.01,
      "Finite-difference residual of both coupled NLS equations.");

  m.def(
      "zero_curvature_residual",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double x, double t,
         Cx k, double h) {
        return zero_curvature_residual(soliton_sampler(make_data(raw)), x, t, k, h);
      },
      py::arg("data"), py::arg("x"), py::arg("t"), py::arg("k"),
      py::arg("h") = 0.01,
      "Frobenius norm of the Lax compatibility residual at spectral k.");

  m.def(
      "component_masses",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double t, double x0,
         double x1, std::size_t n) {
        const auto [m1, m2] = component_masses(soliton_sampler(make_data(raw)),
                                               uniform_grid(x0, x1, n), t);
        return py::make_tuple(m1, m2);
      },
      py::arg("data"), py::arg("t"), py::arg("x0"), py::arg("x1"), py::arg("n"),
      "Simpson masses of |q1|^2 and |q2|^2 at fixed t.");

  m.def(
      "scattering_matrix",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double k, double L,
         std::size_t n_steps, double t) {
        const SolitonData data = make_data(raw);
        double kmax = std::abs(k);
        for (const SpectralDatum& d : data) kmax = std::max(kmax, std::abs(d.k) + 0.1);
        const auto [lw, ns] = resolve_geometry(data, t, kmax, L, n_steps);
        const ScatteringMatrix s =
            compute_S(PotentialSampler{soliton_sampler(data), t}, k, lw, ns);
        py::array_t<Cx> out({std::size_t{3}, std::size_t{3}});
        auto a = out.mutable_unchecked<2>();
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) a(i, j) = s.S(i, j);
        return out;
      },
      py::arg("data"), py::arg("k"), py::arg("L") = 0.0,
      py::arg("n_steps") = 0, py::arg("t") = 0.0,
      "3x3 scattering matrix at real k; L=0 / n_steps=0 pick automatically.");

  m.def(
      "r11",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, Cx k, double L,
         std::size_t n_steps, double t) {
        const SolitonData data = make_data(raw);
        double kmax = std::abs(k);
        for (const SpectralDatum& d : data) kmax = std::max(kmax, std::abs(d.k) + 0.1);
        const auto [lw, ns] = resolve_geometry(data, t, kmax, L, n_steps);
        return r11_upper(PotentialSampler{soliton_sampler(data), t}, k, lw, ns);
      },
      py::arg("data"), py::arg("k"), py::arg("L") = 0.0,
      py::arg("n_steps") = 0, py::arg("t") = 0.0,
      "Analytic transmission entry (S^-1)_11 for Im k >= 0.");

  m.def(
      "find_eigenvalue",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, Cx guess, double L,
         std::size_t n_steps, double t) {
        const SolitonData data = make_data(raw);
        double kmax = std::abs(guess);
        for (const SpectralDatum& d : data) kmax = std::max(kmax, std::abs(d.k) + 0.1);
        const auto [lw, ns] = resolve_geometry(data, t, kmax, L, n_steps);
        return find_discrete_eigenvalue(
            PotentialSampler{soliton_sampler(data), t}, guess, lw, ns);
      },
      py::arg("data"), py::arg("guess"), py::arg("L") = 0.0,
      py::arg("n_steps") = 0, py::arg("t") = 0.0,
      "Newton root of r11 from a starting guess in the upper half plane.");

  m.def(
      "simulate",
      [](const std::vector<std::tuple<Cx, Cx, Cx>>& raw, double L,
         std::size_t n, double dt, double T, double t0) {
        const SolitonData data = make_data(raw);
        const FieldSampler f = soliton_sampler(data);
        SimState st = init_state(f, L, n, t0);
        evolve(st, t0 + T, dt);
        const CompareResult cr = compare(st, f);
        py::array_t<double> x(st.n());
        py::array_t<Cx> q1(st.n()), q2(st.n());
        auto ax = x.mutable_unchecked<1>();
        auto a1 = q1.mutable_unchecked<1>();
        auto a2 = q2.mutable_unchecked<1>();
        for (std::size_t j = 0; j < st.n(); ++j) {
          ax(j) = st.x(j);
          a1(j) = st.q1[j];
          a2(j) = st.q2[j];
        }
        py::dict out;
        out["x"] = x;
        out["q1"] = q1;
        out["q2"] = q2;
        out["t"] = st.t;
        out["linf_error"] = cr.linf;
        out["l2_error"] = cr.l2;
        return out;
      },
      py::arg("data"), py::arg("L"), py::arg("n"), py::arg("dt"), py::arg("T"),
      py::arg("t0") = 0.0,
      "Split-step evolution over [t0, t0+T]; returns the final grid state "
      "and its deviation from the exact solution.");

  m.def(
      "run_scenario",
      [](const std::string& config_path, const std::string& subcommand,
         const std::string& out_dir, const std::vector<std::string>& only,
         double tol_scale) {
        const ScenarioConfig cfg = load_scenario_file(config_path);
        RunOptions opts;
        opts.out_dir = out_dir;
        opts.only = only;
        opts.tol_scale = tol_scale;
        const RunReport r = run_scenario(cfg, subcommand, opts);
        py::list checks;
        for (const CheckResult& c : r.checks) {
          py::dict e;
          e["name"] = c.name;
          e["pass"] = c.passed;
          e["value"] = c.value;
          e["tolerance"] = c.tolerance;
          e["note"] = c.note;
          checks.append(e);
        }
        py::dict out;
        out["subcommand"] = r.subcommand;
        out["all_pass"] = r.all_passed();
        out["checks"] = checks;
        return out;
      },
      py::arg("config_path"), py::arg("subcommand"), py::arg("out_dir"),
      py::arg("only") = std::vector<std::string>{},
      py::arg("tol_scale") = 1.0,
      "Run one CLI subcommand programmatically and return its check report.");
}
