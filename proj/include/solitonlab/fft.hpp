#pragma once

#include <cstddef>
#include <vector>

#include "solitonlab/complex_mat.hpp"

namespace solitonlab {

// Radix-2 iterative FFT with precomputed bit-reversal and twiddle tables.
// Lengths must be powers of two (NotPowerOfTwoError otherwise). forward()
// computes X_k = sum_j x_j e^{-2 pi i j k / n}; inverse() includes the 1/n
// scale, which is exact since n is a power of two.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  void forward(std::vector<Cx>& a) const { transform(a, false); }
  void inverse(std::vector<Cx>& a) const { transform(a, true); }

  std::size_t size() const { return n_; }

 private:
  void transform(std::vector<Cx>& a, bool inv) const;

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<Cx> tw_;  // tw_[j] = e^{-2 pi i j / n}, j < n / 2
};

// One-shot helpers for callers that do not want to keep a plan around.
void fft(std::vector<Cx>& a);
void ifft(std::vector<Cx>& a);

}  // namespace solitonlab
