#pragma once

#include <vector>

#include "solitonlab/complex_mat.hpp"
#include "solitonlab/grid.hpp"
#include "solitonlab/spectral_data.hpp"

namespace solitonlab {

// theta_m = -i k x - i k^2 t. Re(theta) controls growth/decay in x, the
// group velocity is -2 Re k.
Cx theta(const SpectralDatum& d, double x, double t);

// Exponent guards. A Gram exponent past the clamp would overflow double;
// once every |Re(theta_m + conj(theta_m))| exceeds the far-field threshold
// the fields are below ~1e-17 and are returned as exact zeros instead of
// risking an ill-conditioned solve.
inline constexpr double kExponentClamp = 300.0;
inline constexpr double kFarFieldExponent = 40.0;

struct FieldSample {
  Cx q1{0.0, 0.0};
  Cx q2{0.0, 0.0};
  // Set when the point sits on (or numerically at) a pole of the solution.
  // q1/q2 are NaN in that case; regular samples always carry finite values.
  bool singular = false;
};

// N x N Gram matrix of the reflectionless solve,
//   M_mn = [e^{-(conj(th_m)+th_n)} - (conj(c_m)c_n - conj(d_m)d_n)
//           e^{conj(th_m)+th_n}] / (conj(k_m) - k_n).
// Anti-Hermitian by construction. Throws InvalidInputError for N = 0 and
// OverflowError when an exponent passes the clamp.
CMatrix gram_matrix(const SolitonData& data, double x, double t);

// Both field components at one point through the generic N-soliton formula
//   q_j = 2 sum_{m,n} c_{m,j} e^{th_m - conj(th_n)} (M^{-1})_{mn}.
// Never throws for in-clamp points: a singular Gram solve is reported via
// the sample flag. N = 0 returns exact zeros.
FieldSample eval_fields(const SolitonData& data, double x, double t);

// Closed forms, kept free of the linear-solve machinery on purpose so they
// can arbitrate it. Both throw SingularPointError on a pole (csch branch).
FieldSample one_soliton_closed(const SpectralDatum& d, double x, double t);
FieldSample two_soliton_closed(const SolitonData& data2, double x, double t);

struct FieldGrid {
  Grid1D xgrid;
  Grid1D tgrid;
  // t-major: sample index = ti * xgrid.n + xi.
  std::vector<FieldSample> samples;

  const FieldSample& at(std::size_t ti, std::size_t xi) const {
    return samples[ti * xgrid.n + xi];
  }
};

// Grid evaluation never aborts mid-scan: pole hits and exponent overflows
// are recorded per point as singular samples. Honors SOLITONLAB_THREADS
// (worker rows are assigned statically, so results are bit-reproducible
// for any thread count).
FieldGrid eval_grid(const SolitonData& data, const Grid1D& xgrid, const Grid1D& tgrid);

// min |det M| over the grid; skips points past the exponent clamp. Useful
// as a cheap singularity scan before committing to a long simulation.
double min_abs_gram_det(const SolitonData& data, const Grid1D& xgrid, const Grid1D& tgrid);

// 3 x 3 residue matrix of the dressing factor at k -> infinity; the fields
// sit in its first column (q1 = 2 * P(1,0), q2 = 2 * P(2,0)). Propagates
// SingularMatrixError from the Gram solve.
CMatrix reconstruction_matrix(const SolitonData& data, double x, double t);

struct GeneralFieldSample {
  std::vector<Cx> q;
  bool singular = false;
};

// n-component version of eval_fields: signature[j] = -1 marks a defocusing
// component, +1 focusing. The two-component mixed case (signature {-1, +1},
// coeffs {c, d}) reproduces eval_fields bit for bit.
GeneralFieldSample eval_fields_general(const std::vector<GeneralSpectralDatum>& data,
                                       const std::vector<int>& signature,
                                       double x, double t);

// Center of the one-soliton envelope attached to datum m at time t (pole
// line for the csch branch). Used to pick sampling windows.
double envelope_center(const SpectralDatum& d, double t);

}  // namespace solitonlab
