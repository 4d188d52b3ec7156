#pragma once

#include <complex>
#include <optional>

#include "hesvs/fock_state.hpp"
#include "hesvs/params.hpp"

// Closed-form observables of the conditional state.  Every operation here
// has an independent Fock-basis counterpart in hesvs/oracle.hpp; the
// validator in hesvs/gridscan.hpp compares the two.
namespace hesvs::analytic {

using Complex = std::complex<double>;

// Immutable per-parameter-set cache: derived symbols plus the event
// probability p(m).  Construction throws zero_probability_error when the
// heralding event cannot occur.  Freely shareable across threads.
struct Context {
  ModelParams params;
  DerivedParams d;
  double p_event = 0.0;
  double log_p_event = 0.0;
};

Context make_context(const ModelParams& p);

// p(m) by coefficient extraction of the generating function (default route).
double event_probability(const DerivedParams& d, double r, int m);

// Legendre-polynomial closed form for p(m), the cross-check route:
// z^m P_m(b2 / z) / (sqrt(a) cosh^2 r) with z = sqrt(b3) used coherently in
// both places, so the value is invariant under flipping the branch of z.
// Returns nullopt where |b3| < 1e-12 (the closed form degenerates there).
std::optional<double> event_probability_legendre(const DerivedParams& d, double r, int m,
                                                 bool flip_branch = false);

// Variant taking sqrt(b3) and sqrt(b4) independently on their principal
// branches with a leading (-1)^m.  Kept only so the validator can document
// how it deviates from the direct route (it negates p(m) for odd m wherever
// b3 > 0).
std::optional<double> event_probability_legendre_split(const DerivedParams& d, double r, int m);

// Normalized amplitude <n|state>; exact zero when n + m is odd.
Complex fock_amplitude(const Context& c, int n);
// P(n|m) = |<n|state>|^2.
double pnd(const Context& c, int n);
FockState fock_state(const Context& c, int n_max);

// <a^k a†^l> by dense multivariate series extraction; requires k + l <= 8.
Complex moments(const Context& c, int k, int l);
double mean_photon(const Context& c);
// Q = (<a^2 a†^2> - <a a†>^2 - 2 <a a†> + 1) / (<a a†> - 1); throws
// std::domain_error for a vacuum conditional state (<n> = 0).
double mandel_q(const Context& c);

// <x, phi|state> with all branches tied to the analytic continuation from
// mu = 0 (principal, since Re(1 + mu e^{-2 i phi}) > 0).
Complex quadrature_wavefunction(const Context& c, double x, double phi);
double qcd(const Context& c, double x, double phi);

// Phase-space quasiprobabilities as functions of alpha = (x + i p)/sqrt(2),
// normalized over d^2 alpha = dx dp / 2;  W(0,0) = (2/pi)(-1)^m.
double wigner(const Context& c, double x, double p);
double husimi(const Context& c, double x, double p);

// Hermite-sum variant with an alternating (-1)^{m-l} weight.  Rejected by
// the oracle comparison; retained so the validator can report the deviation.
double wigner_alternating_sign_variant(const Context& c, double x, double p);

}  // namespace hesvs::analytic
