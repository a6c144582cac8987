#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "solitonlab/complex_mat.hpp"
#include "solitonlab/grid.hpp"
#include "solitonlab/soliton.hpp"

namespace solitonlab {

// Point sampler abstraction: the verifiers only ever see (x, t) -> sample,
// so they stay independent of how the field was produced.
using FieldSampler = std::function<FieldSample(double, double)>;

FieldSampler soliton_sampler(SolitonData data);

// Constant matrices of the 3 x 3 spectral problem.
//   Lambda = diag(-1, 1, 1), sigma = diag(1, -1, 1).
// sigma encodes the mixed signature: Q satisfies adj(Q) = sigma Q sigma.
CMatrix lambda_matrix();
CMatrix sigma_matrix();

// Potential matrix Q: first row (-conj(q1), conj(q2)), first column (q1, q2).
CMatrix q_matrix(Cx q1, Cx q2);

struct LaxMatrices {
  CMatrix Lambda;  // diag(-1, 1, 1)
  CMatrix sigma;   // diag(1, -1, 1)
  CMatrix Q;       // potential
  CMatrix Q1;      // i Q
  CMatrix Q2;      // i k Q + (i Q^2 + Q_x) Lambda / 2
};

// Assembles everything the zero-curvature check needs at one point. The
// spatial flow is M = -i k Lambda + Q1 and the temporal flow is
// N = -i k^2 Lambda + Q2.
LaxMatrices make_lax_matrices(Cx q1, Cx q2, Cx q1_x, Cx q2_x, Cx k);

// Residual of i q1_t + q1_xx / 2 + (|q2|^2 - |q1|^2) q1 (and the q2 twin)
// with 4th order centered stencils of half-width 2h in each direction.
// Throws StencilOnSingularityError if any stencil leg is singular.
std::pair<Cx, Cx> pde_residual(const FieldSampler& f, double x, double t,
                               double hx, double ht);

// Frobenius norm of M_t - N_x + [M, N] at spectral parameter k, derivatives
// by the same 4th order stencils. Independent of the reconstruction route:
// any exact solution must drive this to stencil-truncation level.
double zero_curvature_residual(const FieldSampler& f, double x, double t,
                               Cx k, double h);

// Component masses (integral of |q_j|^2) by composite Simpson over xg at
// fixed t; an even interval count is closed with a 3/8 tail. Requires the
// boundary samples to have decayed below 1e-6 (BoundaryDecayError) and at
// least 4 grid points; singular samples raise SingularSampleError.
std::pair<double, double> component_masses(const FieldSampler& f,
                                           const Grid1D& xg, double t);

// n-component residuals: i q_jt + q_jxx / 2 + (sum_l s_l |q_l|^2) q_j.
using GeneralSampler = std::function<std::vector<Cx>(double, double)>;
std::vector<Cx> pde_residual_general(const GeneralSampler& f,
                                     const std::vector<int>& signature,
                                     double x, double t, double hx, double ht);

}  // namespace solitonlab
