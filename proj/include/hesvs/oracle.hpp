#pragma once

#include <complex>
#include <vector>

#include "hesvs/fock_state.hpp"
#include "hesvs/params.hpp"

// Exact Fock-basis construction of the conditional state and its
// observables.  Independent of the closed forms in hesvs/analytic.hpp; used
// as ground truth for all of them.
namespace hesvs::oracle {

struct TruncationPolicy {
  int n_max = 0;                  // Schmidt-sum cutoff; 0 = choose automatically
  double tail_tolerance = 1e-14;  // residual Schmidt mass allowed past the cutoff
};

// Effective cutoff: n_max >= max(64, m + 2), raised until
// sech^2(r) tanh^{2 n_max}(r) < tail_tolerance.
TruncationPolicy resolve_truncation(const ModelParams& p, TruncationPolicy requested = {});

// <out_a, out_b| B |in_a, in_b> for B = exp[theta (a† b - a b†)], by binomial
// expansion with log-domain accumulation.  Zero unless the photon number is
// conserved.
double bs_fock_element(double theta, int in_a, int in_b, int out_a, int out_b);

// <k, m| B |n, n>, the column the two-mode squeezed input feeds.
double bs_fock_amplitude(double theta, int n, int k, int m);

struct Conditional {
  FockState state;
  double p_event = 0.0;
};

// Conditional state after heralding m photons, with the event probability.
// Throws zero_probability_error when the event cannot occur.
Conditional conditional_amplitudes(const ModelParams& p, TruncationPolicy t = {});

std::vector<double> pnd(const FockState& s);
std::complex<double> moments(const FockState& s, int k, int l);  // <a^k a†^l>
double mean_photon(const FockState& s);
double mandel_q(const FockState& s);
std::complex<double> quadrature_wavefunction(const FockState& s, double x, double phi);
double qcd(const FockState& s, double x, double phi);
// Displaced-parity evaluation, alpha = (x + i p) / sqrt(2).
double wigner(const FockState& s, double x, double p);
double husimi(const FockState& s, double x, double p);

}  // namespace hesvs::oracle
