#include "solitonlab/fft.hpp"

#include <cmath>

namespace solitonlab {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw NotPowerOfTwoError("fft: length must be a power of two");

  rev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    rev_[i] = r;
  }

  tw_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
    tw_[j] = Cx(std::cos(ang), std::sin(ang));
  }
}

void FftPlan::transform(std::vector<Cx>& a, bool inv) const {
  if (a.size() != n_)
    throw InvalidInputError("fft: buffer length does not match the plan");
  for (std::size_t i = 0; i < n_; ++i)
    if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        Cx w = tw_[j * stride];
        if (inv) w = std::conj(w);
        const Cx u = a[start + j];
        const Cx v = a[start + j + len / 2] * w;
        a[start + j] = u + v;
        a[start + j + len / 2] = u - v;
      }
    }
  }

  if (inv) {
    // n is a power of two, so this scale is exact.
    const double s = 1.0 / static_cast<double>(n_);
    for (Cx& v : a) v *= s;
  }
}

void fft(std::vector<Cx>& a) { FftPlan(a.size()).forward(a); }
void ifft(std::vector<Cx>& a) { FftPlan(a.size()).inverse(a); }

}  // namespace solitonlab
