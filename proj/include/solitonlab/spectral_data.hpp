#pragma once

#include <vector>

#include "solitonlab/complex_mat.hpp"

namespace solitonlab {

// One discrete eigenvalue k (Im k > 0) with its norming coefficients.
// (c, d) scales the bound state attached to the two field components; at
// least one of the pair must be nonzero. |c| < |d| gives a regular (sech
// branch) soliton, |c| > |d| a singular (csch branch) one.
struct SpectralDatum {
  Cx k;
  Cx c;
  Cx d;
};

// N = 0 is the vacuum and is legal wherever evaluation accepts it.
using SolitonData = std::vector<SpectralDatum>;

inline constexpr std::size_t kMaxSpectralPoints = 64;

// Throws InvalidInputError unless: N <= 64, every Im k > 0, every (c, d)
// != (0, 0), and the k values are pairwise distinct. Scenario loading and
// the bindings funnel through this; the numeric kernels assume it holds.
void validate_spectral(const SolitonData& data);

// Spectral datum for the n-component generalization: one coefficient per
// field component, and one shared sign per component telling whether that
// component couples focusing (+1) or defocusing (-1).
struct GeneralSpectralDatum {
  Cx k;
  std::vector<Cx> coeffs;
};

void validate_general(const std::vector<GeneralSpectralDatum>& data,
                      const std::vector<int>& signature);

}  // namespace solitonlab
