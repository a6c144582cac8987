#pragma once

#include <utility>
#include <vector>

#include "solitonlab/complex_mat.hpp"
#include "solitonlab/verify.hpp"

namespace solitonlab {

// Periodic simulation state on x_j = -L + j * (2L / n), j = 0 .. n-1
// (right endpoint excluded by periodicity). n is a power of two.
struct SimState {
  double L = 0.0;
  double t = 0.0;
  std::vector<Cx> q1;
  std::vector<Cx> q2;

  std::size_t n() const { return q1.size(); }
  double dx() const { return 2.0 * L / static_cast<double>(n()); }
  double x(std::size_t j) const { return -L + dx() * static_cast<double>(j); }

  // Discrete L2 masses (sum |q_j|^2 dx) per component. The scheme conserves
  // them exactly up to roundoff: both substeps are pointwise phases or
  // unitary-up-to-scale transforms.
  std::pair<double, double> masses() const;
};

// Samples a field onto the periodic grid. Throws NotPowerOfTwoError,
// InvalidRangeError (L <= 0) and SingularSampleError.
SimState init_state(const FieldSampler& f, double L, std::size_t n, double t0);

// One Strang step: half nonlinear phase, full linear (spectral), half
// nonlinear phase. The nonlinear factor is exact because the local phase
// speed |q2|^2 - |q1|^2 is invariant under a pure phase rotation.
void step(SimState& state, double dt);

// Advances the state to absolute time t_final with uniform steps of dt and
// one shortened final step to land exactly. dt must be positive and t_final
// must not precede state.t.
void evolve(SimState& state, double t_final, double dt);

struct CompareResult {
  double linf = 0.0;
  double l2 = 0.0;
};

// Grid-wise distance between the state and a reference sampler at state.t.
CompareResult compare(const SimState& state, const FieldSampler& reference);

}  // namespace solitonlab
