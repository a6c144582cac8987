#include "solitonlab/verify.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace solitonlab {

FieldSampler soliton_sampler(SolitonData data) {
  return [data = std::move(data)](double x, double t) {
    return eval_fields(data, x, t);
  };
}

CMatrix lambda_matrix() { return CMatrix::diag({{-1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}); }
CMatrix sigma_matrix() { return CMatrix::diag({{1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}}); }

CMatrix q_matrix(Cx q1, Cx q2) {
  CMatrix q(3, 3);
  q(0, 1) = -std::conj(q1);
  q(0, 2) = std::conj(q2);
  q(1, 0) = q1;
  q(2, 0) = q2;
  return q;
}

LaxMatrices make_lax_matrices(Cx q1, Cx q2, Cx q1_x, Cx q2_x, Cx k) {
  const Cx I(0.0, 1.0);
  LaxMatrices lm{lambda_matrix(), sigma_matrix(), q_matrix(q1, q2),
                 CMatrix(), CMatrix()};
  lm.Q1 = lm.Q * I;
  const CMatrix qx = q_matrix(q1_x, q2_x);
  lm.Q2 = lm.Q * (I * k) + (lm.Q * lm.Q * I + qx) * lm.Lambda * Cx(0.5, 0.0);
  return lm;
}

namespace {

// 4th order centered first/second derivatives on a 5-point stencil.
Cx d1_stencil(Cx fm2, Cx fm1, Cx fp1, Cx fp2, double h) {
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

Cx d2_stencil(Cx fm2, Cx fm1, Cx f0, Cx fp1, Cx fp2, double h) {
  return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

struct Stencil {
  // Center, then x and t legs at offsets -2h, -h, +h, +2h.
  FieldSample c, xm2, xm1, xp1, xp2, tm2, tm1, tp1, tp2;
};

Stencil sample_stencil(const FieldSampler& f, double x, double t, double hx,
                       double ht) {
  auto probe = [&](double xx, double tt) {
    FieldSample s = f(xx, tt);
    if (s.singular)
      throw StencilOnSingularityError("stencil leg at x=" + std::to_string(xx) +
                                      ", t=" + std::to_string(tt) + " is singular");
    return s;
  };
  return Stencil{probe(x, t),
                 probe(x - 2.0 * hx, t), probe(x - hx, t),
                 probe(x + hx, t),       probe(x + 2.0 * hx, t),
                 probe(x, t - 2.0 * ht), probe(x, t - ht),
                 probe(x, t + ht),       probe(x, t + 2.0 * ht)};
}

}  // namespace

std::pair<Cx, Cx> pde_residual(const FieldSampler& f, double x, double t,
                               double hx, double ht) {
  if (!(hx > 0.0) || !(ht > 0.0))
    throw InvalidInputError("pde_residual: stencil widths must be positive");
  const Stencil s = sample_stencil(f, x, t, hx, ht);

  const Cx I(0.0, 1.0);
  // Mixed-signature nonlinearity: defocusing first component, focusing second.
  const double v = std::norm(s.c.q2) - std::norm(s.c.q1);

  const Cx q1_t = d1_stencil(s.tm2.q1, s.tm1.q1, s.tp1.q1, s.tp2.q1, ht);
  const Cx q2_t = d1_stencil(s.tm2.q2, s.tm1.q2, s.tp1.q2, s.tp2.q2, ht);
  const Cx q1_xx = d2_stencil(s.xm2.q1, s.xm1.q1, s.c.q1, s.xp1.q1, s.xp2.q1, hx);
  const Cx q2_xx = d2_stencil(s.xm2.q2, s.xm1.q2, s.c.q2, s.xp1.q2, s.xp2.q2, hx);

  return {I * q1_t + 0.5 * q1_xx + v * s.c.q1,
          I * q2_t + 0.5 * q2_xx + v * s.c.q2};
}

double zero_curvature_residual(const FieldSampler& f, double x, double t,
                               Cx k, double h) {
  if (!(h > 0.0))
    throw InvalidInputError("zero_curvature_residual: step must be positive");
  const Stencil s = sample_stencil(f, x, t, h, h);

  const auto qm = [](const FieldSample& fs) { return q_matrix(fs.q1, fs.q2); };
  const CMatrix q = qm(s.c);
  const auto combine1 = [&](const CMatrix& m2, const CMatrix& m1,
                            const CMatrix& p1, const CMatrix& p2) {
    return (m2 - m1 * 8.0 + p1 * 8.0 - p2) * (1.0 / (12.0 * h));
  };
  const CMatrix q_x = combine1(qm(s.xm2), qm(s.xm1), qm(s.xp1), qm(s.xp2));
  const CMatrix q_t = combine1(qm(s.tm2), qm(s.tm1), qm(s.tp1), qm(s.tp2));
  const CMatrix q_xx =
      (qm(s.xm2) * -1.0 + qm(s.xm1) * 16.0 - q * 30.0 + qm(s.xp1) * 16.0 +
       qm(s.xp2) * -1.0) *
      (1.0 / (12.0 * h * h));

  const Cx I(0.0, 1.0);
  const CMatrix lambda = lambda_matrix();
  const CMatrix m_flow = lambda * (-I * k) + q * I;
  const CMatrix n_flow =
      lambda * (-I * k * k) + q * (I * k) + (q * q * I + q_x) * lambda * 0.5;
  // x-derivative of the temporal flow by the product rule.
  const CMatrix n_x =
      q_x * (I * k) + ((q_x * q + q * q_x) * I + q_xx) * lambda * 0.5;
  const CMatrix m_t = q_t * I;

  const CMatrix residual = m_t - n_x + m_flow * n_flow - n_flow * m_flow;
  return residual.frobenius_norm();
}

namespace {

// Composite Simpson with a 3/8 closing rule when the interval count is odd.
double simpson(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::size_t m = n;
  double tail = 0.0;
  if ((n - 1) % 2 == 1) {
    m = n - 3;
    tail = 3.0 * h / 8.0 *
           (v[n - 4] + 3.0 * v[n - 3] + 3.0 * v[n - 2] + v[n - 1]);
  }
  double main_part = 0.0;
  if (m >= 3) {
    double s = v[0] + v[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    main_part = s * h / 3.0;
  }
  return main_part + tail;
}

constexpr double kMassBoundaryGate = 1e-6;

}  // namespace

std::pair<double, double> component_masses(const FieldSampler& f,
                                           const Grid1D& xg, double t) {
  if (xg.n < 4)
    throw InvalidInputError("component_masses: need at least 4 samples");

  std::vector<double> p1(xg.n), p2(xg.n);
  for (std::size_t i = 0; i < xg.n; ++i) {
    const FieldSample s = f(xg.value(i), t);
    if (s.singular)
      throw SingularSampleError("component_masses: singular sample at x=" +
                                std::to_string(xg.value(i)));
    p1[i] = std::norm(s.q1);
    p2[i] = std::norm(s.q2);
    if ((i == 0 || i + 1 == xg.n) &&
        std::max(std::abs(s.q1), std::abs(s.q2)) > kMassBoundaryGate)
      throw BoundaryDecayError(
          "component_masses: field has not decayed at the domain edge x=" +
          std::to_string(xg.value(i)));
  }
  const double h = xg.spacing();
  return {simpson(p1, h), simpson(p2, h)};
}

std::vector<Cx> pde_residual_general(const GeneralSampler& f,
                                     const std::vector<int>& signature,
                                     double x, double t, double hx, double ht) {
  if (!(hx > 0.0) || !(ht > 0.0))
    throw InvalidInputError("pde_residual_general: stencil widths must be positive");
  const std::size_t p = signature.size();
  auto probe = [&](double xx, double tt) {
    std::vector<Cx> v = f(xx, tt);
    if (v.size() != p)
      throw InvalidInputError("pde_residual_general: sampler arity mismatch");
    return v;
  };

  const std::vector<Cx> c = probe(x, t);
  const std::vector<Cx> xm2 = probe(x - 2.0 * hx, t), xm1 = probe(x - hx, t);
  const std::vector<Cx> xp1 = probe(x + hx, t), xp2 = probe(x + 2.0 * hx, t);
  const std::vector<Cx> tm2 = probe(x, t - 2.0 * ht), tm1 = probe(x, t - ht);
  const std::vector<Cx> tp1 = probe(x, t + ht), tp2 = probe(x, t + 2.0 * ht);

  double v = 0.0;
  for (std::size_t j = 0; j < p; ++j)
    v += static_cast<double>(signature[j]) * std::norm(c[j]);

  const Cx I(0.0, 1.0);
  std::vector<Cx> res(p);
  for (std::size_t j = 0; j < p; ++j) {
    const Cx qt = d1_stencil(tm2[j], tm1[j], tp1[j], tp2[j], ht);
    const Cx qxx = d2_stencil(xm2[j], xm1[j], c[j], xp1[j], xp2[j], hx);
    res[j] = I * qt + 0.5 * qxx + v * c[j];
  }
  return res;
}

}  // namespace solitonlab
