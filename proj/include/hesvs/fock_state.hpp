#pragma once

#include <complex>
#include <vector>

namespace hesvs {

// Truncated Fock expansion of the conditional single-mode state.  Amplitudes
// with n + m odd are exactly zero (parity selection rule).
struct FockState {
  std::vector<std::complex<double>> amplitudes;  // index = photon number
  int m_parity = 0;                              // parity of the heralded count m
  int n_max = 0;                                 // highest retained photon number
};

double norm_squared(const FockState& s);

}  // namespace hesvs
