#include "solitonlab/splitstep.hpp"

#include <cmath>
#include <string>

#include "solitonlab/fft.hpp"

namespace solitonlab {

std::pair<double, double> SimState::masses() const {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < n(); ++j) {
    m1 += std::norm(q1[j]);
    m2 += std::norm(q2[j]);
  }
  return {m1 * dx(), m2 * dx()};
}

SimState init_state(const FieldSampler& f, double L, std::size_t n, double t0) {
  if (!(L > 0.0)) throw InvalidRangeError("init_state: half-width must be positive");
  if (n == 0 || (n & (n - 1)) != 0)
    throw NotPowerOfTwoError("init_state: grid size must be a power of two");

  SimState st{L, t0, std::vector<Cx>(n), std::vector<Cx>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const FieldSample s = f(st.x(j), t0);
    if (s.singular)
      throw SingularSampleError("init_state: singular sample at x=" +
                                std::to_string(st.x(j)));
    st.q1[j] = s.q1;
    st.q2[j] = s.q2;
  }
  return st;
}

namespace {

void half_nonlinear(SimState& st, double dt) {
  for (std::size_t j = 0; j < st.n(); ++j) {
    // |q2|^2 - |q1|^2 is invariant under the rotation it generates, so this
    // substep is the exact nonlinear flow, not an approximation.
    const double v = std::norm(st.q2[j]) - std::norm(st.q1[j]);
    const Cx ph = std::polar(1.0, v * dt * 0.5);
    st.q1[j] *= ph;
    st.q2[j] *= ph;
  }
}

void full_linear(SimState& st, double dt, const FftPlan& plan,
                 std::vector<Cx>& phase) {
  const std::size_t n = st.n();
  const double base = M_PI / st.L;
  for (std::size_t j = 0; j < n; ++j) {
    // Wavenumbers in DFT wrap order: 0..n/2-1, then -n/2..-1.
    const double m = j < n / 2 ? static_cast<double>(j)
                               : static_cast<double>(j) - static_cast<double>(n);
    const double xi = base * m;
    phase[j] = std::polar(1.0, -0.5 * xi * xi * dt);
  }
  plan.forward(st.q1);
  plan.forward(st.q2);
  for (std::size_t j = 0; j < n; ++j) {
    st.q1[j] *= phase[j];
    st.q2[j] *= phase[j];
  }
  plan.inverse(st.q1);
  plan.inverse(st.q2);
}

void strang_step(SimState& st, double dt, const FftPlan& plan,
                 std::vector<Cx>& scratch) {
  half_nonlinear(st, dt);
  full_linear(st, dt, plan, scratch);
  half_nonlinear(st, dt);
  st.t += dt;
}

}  // namespace

void step(SimState& state, double dt) {
  if (!(dt > 0.0)) throw InvalidRangeError("step: dt must be positive");
  FftPlan plan(state.n());
  std::vector<Cx> scratch(state.n());
  strang_step(state, dt, plan, scratch);
}

void evolve(SimState& state, double t_final, double dt) {
  if (!(dt > 0.0)) throw InvalidRangeError("evolve: dt must be positive");
  const double span = t_final - state.t;
  if (span < -1e-12)
    throw InvalidRangeError("evolve: target time precedes the state");
  if (span <= 0.0) return;

  FftPlan plan(state.n());
  std::vector<Cx> scratch(state.n());

  const double t0 = state.t;
  const std::size_t full = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  for (std::size_t i = 0; i < full; ++i) {
    strang_step(state, dt, plan, scratch);
    // Uniform steps are reconstructed from the origin to keep t free of
    // accumulated roundoff.
    state.t = t0 + dt * static_cast<double>(i + 1);
  }
  const double rem = t_final - state.t;
  if (rem > 1e-12 * std::max(1.0, std::abs(t_final)))
    strang_step(state, rem, plan, scratch);
  state.t = t_final;
}

CompareResult compare(const SimState& state, const FieldSampler& reference) {
  CompareResult r;
  double acc = 0.0;
  for (std::size_t j = 0; j < state.n(); ++j) {
    const FieldSample s = reference(state.x(j), state.t);
    if (s.singular)
      throw SingularSampleError("compare: singular reference at x=" +
                                std::to_string(state.x(j)));
    const double d1 = std::abs(state.q1[j] - s.q1);
    const double d2 = std::abs(state.q2[j] - s.q2);
    r.linf = std::max({r.linf, d1, d2});
    acc += d1 * d1 + d2 * d2;
  }
  r.l2 = std::sqrt(acc * state.dx());
  return r;
}

}  // namespace solitonlab
