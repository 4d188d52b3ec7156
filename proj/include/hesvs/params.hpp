#pragma once

#include <complex>

#include "hesvs/errors.hpp"

namespace hesvs {

using Complex = std::complex<double>;

inline constexpr int kMaxDetectedPhotons = 30;

// Experiment knobs: beam-splitter angle, input squeezing, heralded count.
struct ModelParams {
  double theta = 0.0;  // radians in [0, pi/2]; transmittance cos(theta)
  double r = 0.0;      // two-mode squeezing, >= 0
  int m = 0;           // detected photon count, 0..30
};

// Throws std::invalid_argument naming the offending field.
void validate(const ModelParams& p);

// Every derived symbol the closed forms consume, computed once.
struct DerivedParams {
  double mu = 0.0;      // sin(2 theta) tanh r; also tanh of the conditional squeezing
  double nu = 0.0;      // cos(2 theta) tanh r
  double lambda = 0.0;  // atanh(mu), conditional squeezing
  double a = 1.0;       // 1 - mu^2
  double b1 = 0.0;      // mu / (a cosh^2 r)
  double b2 = 0.0;      // nu^2 / a
  double b3 = 0.0;      // (tanh^4 r - mu^2) / a; changes sign where sin 2theta = tanh r
  double b4 = 0.0;      // nu^4 / (a^2 b3); meaningful only when b4_finite
  bool b4_finite = true;
  double xi = 1.0;      // (1 + mu^2) / (1 - mu^2)
};

DerivedParams derive(const ModelParams& p);

// Complex auxiliaries of the quadrature wavefunction at homodyne phase phi.
struct PhaseParams {
  double phi = 0.0;
  Complex theta;  // 1 + mu e^{-2 i phi}
  Complex pi;     // (1 - mu e^{-2 i phi}) / theta           (Gaussian envelope)
  Complex gamma;  // (mu + e^{-2 i phi} tanh^2 r) / theta    (Hermite scale)
  Complex delta;  // e^{-i phi} nu / theta                   (Hermite argument)
};

PhaseParams phase_params(const DerivedParams& d, double r, double phi);

// R = 2 nu (alpha - mu alpha*) / a, the Wigner Hermite argument.
Complex wigner_aux(const DerivedParams& d, Complex alpha);

}  // namespace hesvs
