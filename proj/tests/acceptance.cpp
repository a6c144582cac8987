// Acceptance gate: one line per criterion, every tolerance pinned here.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "solitonlab/scattering.hpp"
#include "solitonlab/soliton.hpp"
#include "solitonlab/splitstep.hpp"
#include "solitonlab/verify.hpp"
#include "support.hpp"

using namespace solitonlab;

namespace {

struct Criterion {
  int id;
  bool pass;
  std::string detail;
};

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

const SolitonData& reference() {
  static const SolitonData d = testsupport::reference_one_soliton();
  return d;
}

// Probes around every moving envelope plus collision midpoints.
std::vector<std::pair<double, double>> probes(const SolitonData& data) {
  std::vector<std::pair<double, double>> pts;
  for (const SpectralDatum& d : data) {
    const double s = 1.0 / (2.0 * d.k.imag());
    for (double t : {-1.5, 0.0, 1.5})
      for (double u : {-3.0, -1.0, 0.0, 1.0, 3.0})
        pts.emplace_back(envelope_center(d, t) + u * s, t);
  }
  for (std::size_t m = 0; m + 1 < data.size(); ++m)
    pts.emplace_back(0.5 * (envelope_center(data[m], 0.0) +
                            envelope_center(data[m + 1], 0.0)),
                     0.0);
  return pts;
}

double max_pde_residual(const SolitonData& data, double h) {
  const FieldSampler f = soliton_sampler(data);
  double worst = 0.0;
  for (const auto& [x, t] : probes(data)) {
    const auto [r1, r2] = pde_residual(f, x, t, h, h);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

// --- criterion 1: closed forms against the generic engine ------------------

Criterion criterion_closed_forms() {
  constexpr double kTol = 1e-12;
  constexpr double kBudget = 1.0;  // seconds
  const auto start = std::chrono::steady_clock::now();

  std::mt19937_64 g(0x1a2b3c4d5e6f7081ull);
  double worst = 0.0;

  const SolitonData one = reference();
  for (int i = 0; i < 1000; ++i) {
    const double t = testsupport::uniform(g, -2.0, 2.0);
    const double x = envelope_center(one[0], t) +
                     testsupport::uniform(g, -8.0, 8.0) / (2.0 * one[0].k.imag());
    const FieldSample a = one_soliton_closed(one[0], x, t);
    const FieldSample b = eval_fields(one, x, t);
    worst = std::max({worst, std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)});
  }

  const SolitonData two = testsupport::reference_two_soliton();
  for (int i = 0; i < 1000; ++i) {
    const double t = testsupport::uniform(g, -2.0, 2.0);
    const double x = testsupport::uniform(g, -25.0, 25.0);
    const FieldSample a = two_soliton_closed(two, x, t);
    const FieldSample b = eval_fields(two, x, t);
    worst = std::max({worst, std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)});
  }

  const double sec = now_seconds(start);
  return {1, worst <= kTol && sec <= kBudget,
          "closed forms vs generic engine: max diff " + fmt(worst) + " <= " +
              fmt(kTol) + ", 2000 points in " + fmt(sec) + "s (budget " +
              fmt(kBudget) + "s)"};
}

// --- criterion 2: component ratio on a dense grid ---------------------------

Criterion criterion_component_ratio() {
  constexpr double kRatioTol = 1e-12;
  constexpr double kAmpTol = 1e-6;
  constexpr double kBudget = 5.0;
  const auto start = std::chrono::steady_clock::now();
  const FieldGrid g =
      eval_grid(reference(), uniform_grid(-100.0, 100.0, 801),
                uniform_grid(-50.0, 50.0, 401));
  std::size_t singular = 0;
  double worst = 0.0, maxq1 = 0.0;
  for (const FieldSample& s : g.samples) {
    if (s.singular) {
      ++singular;
      continue;
    }
    maxq1 = std::max(maxq1, std::abs(s.q1));
    if (std::abs(s.q1) > 0.0) worst = std::max(worst, std::abs(s.q2 / s.q1 - 2.0));
  }
  // Peak modulus 2 |c| Im k / sqrt(|d|^2 - |c|^2) for the reference datum.
  const double amp_err = std::abs(maxq1 - 0.12 / std::sqrt(12.0));
  const double sec = now_seconds(start);
  return {2,
          worst <= kRatioTol && amp_err <= kAmpTol && singular == 0 &&
              sec <= kBudget,
          "reference data on an 801x401 grid: peak |q1| off analytic by " +
              fmt(amp_err) + " <= " + fmt(kAmpTol) + ", max |q2/q1 - 2| " +
              fmt(worst) + " <= " + fmt(kRatioTol) + ", " +
              std::to_string(singular) + " singular samples (need 0), " +
              fmt(sec) + "s (budget " + fmt(kBudget) + "s)"};
}

// --- criterion 3: residual size and 4th order stencil convergence ----------

Criterion criterion_pde_residual() {
  constexpr double kTol = 1e-6;
  constexpr double kRatio = 12.0;
  constexpr double kBudget = 60.0;
  const auto start = std::chrono::steady_clock::now();

  double worst_res = 0.0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
    const std::size_t n = seed / 11;  // 1, 2, 3 solitons
    const SolitonData data = testsupport::random_regular_data(n, seed);
    const double coarse = max_pde_residual(data, 0.01);
    const double fine = max_pde_residual(data, 0.005);
    worst_res = std::max(worst_res, coarse);
    worst_ratio = std::min(worst_ratio, coarse / fine);
  }
  const double sec = now_seconds(start);
  return {3, worst_res <= kTol && worst_ratio >= kRatio && sec <= kBudget,
          "pde residual on random nonsingular 1/2/3-soliton data: max " +
              fmt(worst_res) + " <= " + fmt(kTol) + " at h=0.01, halving ratio " +
              fmt(worst_ratio) + " >= " + fmt(kRatio) + ", " + fmt(sec) +
              "s (budget " + fmt(kBudget) + "s)"};
}

// --- criterion 4: zero curvature at random spectral parameters -------------

Criterion criterion_zero_curvature() {
  constexpr double kTol = 1e-6;
  // Same draw as the two-soliton case of criterion 3.
  const SolitonData data = testsupport::random_regular_data(2, 22);
  const FieldSampler f = soliton_sampler(data);
  std::mt19937_64 g(0xfeedfacecafebeefull);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Cx k(testsupport::uniform(g, -1.5, 1.5), testsupport::uniform(g, -1.5, 1.5));
    for (const SpectralDatum& d : data) {
      const double x = envelope_center(d, 0.0) +
                       testsupport::uniform(g, -3.0, 3.0) / (2.0 * d.k.imag());
      worst = std::max(worst, zero_curvature_residual(f, x, 0.0, k, 0.01));
    }
  }
  return {4, worst <= kTol,
          "zero-curvature residual at 5 random spectral parameters: max " +
              fmt(worst) + " <= " + fmt(kTol)};
}

// --- criterion 5: mass conservation -----------------------------------------

Criterion criterion_masses() {
  constexpr double kTol = 1e-8;
  const FieldSampler f1 = soliton_sampler(reference());
  const Grid1D xg1 = uniform_grid(-360.0, 320.0, 15633);
  const auto [m1a, m2a] = component_masses(f1, xg1, 0.0);
  const auto [m1b, m2b] = component_masses(f1, xg1, 5.0);
  double drift = std::max(std::abs(m1b - m1a) / m1a, std::abs(m2b - m2a) / m2a);

  const FieldSampler f2 = soliton_sampler(testsupport::reference_two_soliton());
  const Grid1D xg2 = uniform_grid(-340.0, 340.0, 13601);
  const auto [n1a, n2a] = component_masses(f2, xg2, 0.0);
  const auto [n1b, n2b] = component_masses(f2, xg2, 5.0);
  drift = std::max({drift, std::abs(n1b - n1a) / n1a, std::abs(n2b - n2a) / n2a});

  return {5, drift <= kTol,
          "component masses constant from t=0 to t=5 (1- and 2-soliton): worst "
          "relative drift " +
              fmt(drift) + " <= " + fmt(kTol) + " (one-soliton m1=" + fmt(m1a) +
              ", m2=" + fmt(m2a) + ")"};
}

// --- criterion 6: split-step cross-check at pinned parameters ---------------

Criterion criterion_splitstep() {
  constexpr double kLinfTol = 1e-4;
  constexpr double kDriftTol = 1e-12;
  constexpr double kRatioLo = 3.5;
  constexpr double kRatioHi = 4.5;
  constexpr double kBudget = 180.0;
  const auto start = std::chrono::steady_clock::now();
  const double L = 100.0, dt = 1e-3, T = 5.0;
  const std::size_t n = 4096;

  const FieldSampler f = soliton_sampler(reference());
  SimState coarse = init_state(f, L, n, 0.0);
  const auto [m1a, m2a] = coarse.masses();
  evolve(coarse, T, dt);
  const auto [m1b, m2b] = coarse.masses();
  const double linf = compare(coarse, f).linf;
  const double drift = std::max(std::abs(m1b - m1a) / m1a, std::abs(m2b - m2a) / m2a);

  SimState fine = init_state(f, L, n, 0.0);
  evolve(fine, T, 0.5 * dt);
  const double linf_fine = compare(fine, f).linf;
  const double ratio = linf_fine > 0.0 ? linf / linf_fine
                                       : std::numeric_limits<double>::infinity();

  const double sec = now_seconds(start);
  const bool pass = linf <= kLinfTol && drift <= kDriftTol && ratio >= kRatioLo &&
                    ratio <= kRatioHi && sec <= kBudget;
  return {6, pass,
          "split-step at L=100, n=4096, dt=1e-3, T=5: linf " + fmt(linf) +
              " <= " + fmt(kLinfTol) + ", mass drift " + fmt(drift) + " <= " +
              fmt(kDriftTol) + ", dt-halving ratio " + fmt(ratio) + " in [" +
              fmt(kRatioLo) + ", " + fmt(kRatioHi) + "], " + fmt(sec) +
              "s (budget " + fmt(kBudget) + "s)"};
}

// --- criteria 7-9: direct scattering ----------------------------------------

struct ScatterSetup {
  double L;
  std::size_t n;
};

ScatterSetup scatter_setup() {
  const FieldSampler f = soliton_sampler(reference());
  const double L = auto_half_width(f, 0.0);
  return {L, auto_steps(L, 1.5)};
}

Criterion criterion_smatrix() {
  constexpr double kStructTol = 1e-8;
  constexpr double kReflTol = 1e-6;
  constexpr double kBudget = 60.0;
  const auto start = std::chrono::steady_clock::now();

  const ScatterSetup su = scatter_setup();
  const JostIntegrator ji(PotentialSampler{soliton_sampler(reference()), 0.0},
                          su.L, su.n);
  const CMatrix sigma = sigma_matrix();
  const CMatrix id = CMatrix::identity(3);
  double det_err = 0.0, sym_err = 0.0, refl = 0.0;
  for (double k : {0.3, 0.7, 1.5}) {
    const ScatteringMatrix s = ji.scattering_matrix(k);
    det_err = std::max(det_err, std::abs(lu_det(s.S) - Cx(1.0, 0.0)));
    sym_err = std::max(sym_err, (s.S * sigma * s.S.adjoint() * sigma - id).inf_norm());
    refl = std::max(refl, reflection_magnitude(s));
  }
  const double sec = now_seconds(start);
  const bool pass = det_err <= kStructTol && sym_err <= kStructTol &&
                    refl <= kReflTol && sec <= kBudget;
  return {7, pass,
          "scattering matrix at k=0.3/0.7/1.5 (L=" + fmt(su.L) +
              "): |det-1| " + fmt(det_err) + " <= " + fmt(kStructTol) +
              ", symmetry defect " + fmt(sym_err) + " <= " + fmt(kStructTol) +
              ", reflection " + fmt(refl) + " <= " + fmt(kReflTol) + ", " +
              fmt(sec) + "s (budget " + fmt(kBudget) + "s)"};
}

Criterion criterion_eigenvalue() {
  constexpr double kTol = 1e-6;
  constexpr double kBudget = 60.0;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;

  const ScatterSetup su = scatter_setup();
  const Cx truth = reference()[0].k;
  const Cx found = find_discrete_eigenvalue(
      PotentialSampler{soliton_sampler(reference()), 0.0},
      truth + Cx(0.035, 0.035), su.L, su.n);
  worst = std::max(worst, std::abs(found - truth));

  // Both planted eigenvalues of the two-soliton potential.
  const SolitonData two = testsupport::reference_two_soliton();
  const FieldSampler f2 = soliton_sampler(two);
  const double L2 = auto_half_width(f2, 0.0);
  const std::size_t n2 = auto_steps(L2, 1.5);
  for (const SpectralDatum& d : two) {
    const Cx got = find_discrete_eigenvalue(PotentialSampler{f2, 0.0},
                                            d.k + Cx(0.035, 0.035), L2, n2);
    worst = std::max(worst, std::abs(got - d.k));
  }

  const double sec = now_seconds(start);
  return {8, worst <= kTol && sec <= kBudget,
          "discrete eigenvalues from displaced guesses (1- and 2-soliton): "
          "max |found - true| " +
              fmt(worst) + " <= " + fmt(kTol) + ", " + fmt(sec) + "s (budget " +
              fmt(kBudget) + "s)"};
}

Criterion criterion_time_evolution() {
  constexpr double kTol = 1e-7;
  const ScatterSetup su = scatter_setup();
  const EvolutionDrift d = time_evolution_check(soliton_sampler(reference()),
                                                0.7, 0.0, 1.0, su.L, su.n);
  return {9, d.constancy <= kTol,
          "scattering data constant from t=0 to t=1 at k=0.7: drift " +
              fmt(d.constancy) + " <= " + fmt(kTol)};
}

// --- criterion 10: the verifiers reject wrong fields -------------------------

Criterion criterion_negative_controls() {
  constexpr double kResidualFloor = 1e-4;
  constexpr double kReflectionFloor = 1e-3;

  const SolitonData big{{Cx(0.1, 0.5), Cx(1.0, 0.0), Cx(std::sqrt(2.0), 0.0)}};
  const FieldSampler exact = soliton_sampler(big);
  const FieldSampler corrupted = [exact](double x, double t) {
    FieldSample s = exact(x, t);
    s.q1 *= 1.01;
    return s;
  };
  double resid = 0.0;
  for (const auto& [x, t] : probes(big)) {
    const auto [r1, r2] = pde_residual(corrupted, x, t, 0.01, 0.01);
    resid = std::max({resid, std::abs(r1), std::abs(r2)});
  }

  const FieldSampler gaussian = [](double x, double) {
    return FieldSample{Cx(std::exp(-x * x), 0.0), Cx(0.0, 0.0), false};
  };
  const ScatteringMatrix s =
      compute_S(PotentialSampler{gaussian, 0.0}, 0.3, 8.0, 4000);
  const double refl = reflection_magnitude(s);

  return {10, resid >= kResidualFloor && refl >= kReflectionFloor,
          "negative controls: 1% corruption leaves residual " + fmt(resid) +
              " >= " + fmt(kResidualFloor) + ", gaussian pulse reflects " +
              fmt(refl) + " >= " + fmt(kReflectionFloor)};
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion_closed_forms());
  results.push_back(criterion_component_ratio());
  results.push_back(criterion_pde_residual());
  results.push_back(criterion_zero_curvature());
  results.push_back(criterion_masses());
  results.push_back(criterion_splitstep());
  results.push_back(criterion_smatrix());
  results.push_back(criterion_eigenvalue());
  results.push_back(criterion_time_evolution());
  results.push_back(criterion_negative_controls());

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures;
}
