#pragma once

#include <cstddef>

#include "solitonlab/complex_mat.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

// Potential for direct scattering: a field sampler frozen at time t0. The
// domain half-width L and the step count are per-operation parameters.
struct PotentialSampler {
  FieldSampler fields;
  double t0 = 0.0;
};

struct ScatteringMatrix {
  CMatrix S;  // 3 x 3
  double k = 0.0;
  double L = 0.0;
  std::size_t n_steps = 0;
};

// Integrates the Jost system J' = -i k [Lambda, J] + i Q J from -L (J = I)
// to +L with fixed-step RK4. The potential is sampled once at the 2n+1
// half-step points and the table is reused for every spectral parameter.
class JostIntegrator {
 public:
  JostIntegrator(const PotentialSampler& pot, double L, std::size_t n_steps);

  // Full scattering matrix at real k:
  //   S_ij = e^{i k (lambda_i - lambda_j) L} J_ij(L).
  // det S = 1 and S sigma adj(S) sigma = I hold exactly for any potential
  // sampled on [-L, L]; only the reflectionless property needs decay.
  ScatteringMatrix scattering_matrix(double k) const;

  // Upper transmission entry r11 = (S^{-1})_11 continued to Im k >= 0,
  // computed from the two bounded Jost columns only, so nothing grows for
  // Im k > 0. Zeros of r11 in the open upper half plane are the discrete
  // eigenvalues. Throws InvalidInputError for Im k < 0.
  Cx r11(Cx k) const;

  double L() const { return L_; }
  std::size_t steps() const { return n_; }

 private:
  double L_;
  std::size_t n_;
  double h_;
  std::vector<Cx> s1_, s2_;  // field samples at half-step resolution
};

ScatteringMatrix compute_S(const PotentialSampler& pot, double k, double L,
                           std::size_t n_steps);
Cx r11_upper(const PotentialSampler& pot, Cx k, double L, std::size_t n_steps);

// Largest first-row/first-column off-diagonal magnitude of S; zero (to
// integration accuracy) for reflectionless potentials.
double reflection_magnitude(const ScatteringMatrix& S);

// Newton iteration on r11 with a centered real-direction difference for
// the derivative. Stops at |r11| < 1e-9 or step < 1e-10; at most 50 steps.
// Throws LeftUpperHalfPlaneError if an iterate leaves Im k > 0 and
// NoConvergenceError on a vanishing derivative or an exhausted budget.
Cx find_discrete_eigenvalue(const PotentialSampler& pot, Cx guess, double L,
                            std::size_t n_steps);

struct EvolutionDrift {
  // Absolute changes of the entries that the flow holds constant:
  // s11, s22, s23, s32, s33.
  double constancy = 0.0;
  // |s12(t2) - s12(t1) e^{2 i k^2 (t2 - t1)}|: the evolved off-diagonal law.
  double s12_law = 0.0;
};

EvolutionDrift time_evolution_check(const FieldSampler& f, double k,
                                    double t1, double t2, double L,
                                    std::size_t n_steps);

// Grows the half-width from L0 until both fields are below `gate` at +-L
// (checked at t). Throws BoundaryDecayError past l_max.
double auto_half_width(const FieldSampler& f, double t, double gate = 1e-10,
                       double l0 = 60.0, double l_max = 4000.0);

// Step count for which the RK4 phase-error model (2 k h)^5 n / 120 stays
// below tol across [-L, L] for |k| <= kmax. Never fewer than 2000 steps.
std::size_t auto_steps(double L, double kmax, double tol = 1e-9);

}  // namespace solitonlab
