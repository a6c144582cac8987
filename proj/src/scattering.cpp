#include "solitonlab/scattering.hpp"

#include <array>
#include <cmath>
#include <string>

namespace solitonlab {

namespace {

using Vec3 = std::array<Cx, 3>;

// Right-hand side of one Jost column: v' = -i k (Lambda - lambda_j) v + i Q v.
// lambda_j is the column's own eigenvalue, so the fast phase of that column
// is already divided out where it matters (diag entries of Lambda - lambda_j
// vanish on the column's subspace).
Vec3 column_rhs(const Vec3& v, Cx q1, Cx q2, Cx k, double lambda_j) {
  const Cx I(0.0, 1.0);
  const Cx qv0 = -std::conj(q1) * v[1] + std::conj(q2) * v[2];
  const Cx qv1 = q1 * v[0];
  const Cx qv2 = q2 * v[0];
  return Vec3{-I * k * (-1.0 - lambda_j) * v[0] + I * qv0,
              -I * k * (1.0 - lambda_j) * v[1] + I * qv1,
              -I * k * (1.0 - lambda_j) * v[2] + I * qv2};
}

Vec3 axpy(const Vec3& v, double a, const Vec3& d) {
  return Vec3{v[0] + a * d[0], v[1] + a * d[1], v[2] + a * d[2]};
}

}  // namespace

JostIntegrator::JostIntegrator(const PotentialSampler& pot, double L,
                               std::size_t n_steps)
    : L_(L), n_(n_steps) {
  if (!(L > 0.0))
    throw InvalidInputError("scattering: half-width must be positive");
  if (n_steps == 0)
    throw InvalidInputError("scattering: need at least one step");
  h_ = 2.0 * L / static_cast<double>(n_steps);

  // Potential table at half-step resolution; shared by every k.
  const std::size_t count = 2 * n_steps + 1;
  s1_.resize(count);
  s2_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -L + 0.5 * h_ * static_cast<double>(i);
    const FieldSample s = pot.fields(x, pot.t0);
    if (s.singular)
      throw SingularSampleError("scattering: singular potential at x=" +
                                std::to_string(x));
    s1_[i] = s.q1;
    s2_[i] = s.q2;
  }
}

namespace {

// Classic RK4 sweep of one column across the sampled potential table.
Vec3 integrate_column(const std::vector<Cx>& s1, const std::vector<Cx>& s2,
                      double h, std::size_t n, Vec3 v, Cx k, double lambda_j) {
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t i0 = 2 * m;
    const Vec3 k1 = column_rhs(v, s1[i0], s2[i0], k, lambda_j);
    const Vec3 k2 = column_rhs(axpy(v, 0.5 * h, k1), s1[i0 + 1], s2[i0 + 1], k, lambda_j);
    const Vec3 k3 = column_rhs(axpy(v, 0.5 * h, k2), s1[i0 + 1], s2[i0 + 1], k, lambda_j);
    const Vec3 k4 = column_rhs(axpy(v, h, k3), s1[i0 + 2], s2[i0 + 2], k, lambda_j);
    for (int c = 0; c < 3; ++c)
      v[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  }
  return v;
}

}  // namespace

ScatteringMatrix JostIntegrator::scattering_matrix(double k) const {
  const double lambdas[3] = {-1.0, 1.0, 1.0};
  CMatrix j(3, 3);
  for (int col = 0; col < 3; ++col) {
    Vec3 v{Cx(0.0, 0.0), Cx(0.0, 0.0), Cx(0.0, 0.0)};
    v[col] = Cx(1.0, 0.0);
    const Vec3 out = integrate_column(s1_, s2_, h_, n_, v, Cx(k, 0.0), lambdas[col]);
    for (int row = 0; row < 3; ++row) j(row, col) = out[row];
  }
  // S = E J(L) E^{-1} with E = diag(e^{i k lambda_i L}): the boundary
  // normalization that makes S the identity for the vacuum at any L.
  ScatteringMatrix s{CMatrix(3, 3), k, L_, n_};
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) {
      const double phase = k * (lambdas[row] - lambdas[col]) * L_;
      s.S(row, col) = j(row, col) * std::polar(1.0, phase);
    }
  return s;
}

Cx JostIntegrator::r11(Cx k) const {
  if (k.imag() < 0.0)
    throw InvalidInputError("r11: spectral parameter must satisfy Im k >= 0");
  // Only the two lambda = +1 columns enter the (1,1) cofactor, and in this
  // gauge they stay bounded for Im k > 0.
  Vec3 e1{Cx(0.0, 0.0), Cx(1.0, 0.0), Cx(0.0, 0.0)};
  Vec3 e2{Cx(0.0, 0.0), Cx(0.0, 0.0), Cx(1.0, 0.0)};
  const Vec3 a = integrate_column(s1_, s2_, h_, n_, e1, k, 1.0);
  const Vec3 b = integrate_column(s1_, s2_, h_, n_, e2, k, 1.0);
  return a[1] * b[2] - a[2] * b[1];
}

ScatteringMatrix compute_S(const PotentialSampler& pot, double k, double L,
                           std::size_t n_steps) {
  return JostIntegrator(pot, L, n_steps).scattering_matrix(k);
}

Cx r11_upper(const PotentialSampler& pot, Cx k, double L, std::size_t n_steps) {
  return JostIntegrator(pot, L, n_steps).r11(k);
}

double reflection_magnitude(const ScatteringMatrix& s) {
  return std::max({std::abs(s.S(0, 1)), std::abs(s.S(0, 2)),
                   std::abs(s.S(1, 0)), std::abs(s.S(2, 0))});
}

Cx find_discrete_eigenvalue(const PotentialSampler& pot, Cx guess, double L,
                            std::size_t n_steps) {
  const JostIntegrator ji(pot, L, n_steps);
  constexpr double kDelta = 1e-5;      // real-direction derivative step
  constexpr double kResidualTol = 1e-9;
  constexpr double kStepTol = 1e-10;
  Cx k = guess;
  for (int it = 0; it < 50; ++it) {
    if (!(k.imag() > 0.0))
      throw LeftUpperHalfPlaneError(
          "find_discrete_eigenvalue: iterate left the upper half plane");
    const Cx r = ji.r11(k);
    if (std::abs(r) < kResidualTol) return k;
    // r11 is analytic here, so one real direction determines the derivative.
    const Cx dr = (ji.r11(k + kDelta) - ji.r11(k - kDelta)) / (2.0 * kDelta);
    if (std::abs(dr) < 1e-13)
      throw NoConvergenceError(
          "find_discrete_eigenvalue: r11 locally flat, no root nearby");
    const Cx dk = r / dr;
    k -= dk;
    if (std::abs(dk) < kStepTol) {
      if (!(k.imag() > 0.0))
        throw LeftUpperHalfPlaneError(
            "find_discrete_eigenvalue: root left the upper half plane");
      return k;
    }
  }
  throw NoConvergenceError("find_discrete_eigenvalue: no convergence in 50 steps");
}

EvolutionDrift time_evolution_check(const FieldSampler& f, double k, double t1,
                                    double t2, double L, std::size_t n_steps) {
  const ScatteringMatrix sa = compute_S(PotentialSampler{f, t1}, k, L, n_steps);
  const ScatteringMatrix sb = compute_S(PotentialSampler{f, t2}, k, L, n_steps);

  EvolutionDrift d;
  const std::pair<int, int> constant_entries[] = {
      {0, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (const auto& [i, j] : constant_entries)
    d.constancy = std::max(d.constancy, std::abs(sb.S(i, j) - sa.S(i, j)));
  const Cx law = sa.S(0, 1) * std::polar(1.0, 2.0 * k * k * (t2 - t1));
  d.s12_law = std::abs(sb.S(0, 1) - law);
  return d;
}

double auto_half_width(const FieldSampler& f, double t, double gate, double l0,
                       double l_max) {
  double L = l0;
  while (true) {
    const FieldSample a = f(-L, t);
    const FieldSample b = f(L, t);
    if (!a.singular && !b.singular) {
      const double amp = std::max({std::abs(a.q1), std::abs(a.q2),
                                   std::abs(b.q1), std::abs(b.q2)});
      if (amp < gate) return L;
    }
    if (L >= l_max)
      throw BoundaryDecayError("auto_half_width: no decay below gate by L=" +
                               std::to_string(l_max));
    L = std::min(l_max, L * 1.3);
  }
}

std::size_t auto_steps(double L, double kmax, double tol) {
  const double k = std::max(0.1, kmax);
  // Phase-error budget of RK4 on e^{2ikx}: (2L/h) (2kh)^5 / 120 <= tol.
  const double h = std::pow(120.0 * tol / (2.0 * L * std::pow(2.0 * k, 5.0)), 0.25);
  double n = std::ceil(2.0 * L / h);
  n = std::max(n, 2000.0);
  std::size_t steps = static_cast<std::size_t>(n);
  if (steps % 2 != 0) ++steps;
  return steps;
}

}  // namespace solitonlab
