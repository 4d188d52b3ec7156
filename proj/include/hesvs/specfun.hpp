#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hesvs::specfun {

using Complex = std::complex<double>;

// Highest polynomial order the three-term recurrences accept.  They stay
// well conditioned up to here for the |z| <~ 10 range this code evaluates.
inline constexpr int kMaxOrder = 60;

// Physicists' Hermite polynomial H_m(z) for complex z.
Complex hermite(int m, Complex z);

// Legendre polynomial P_m(z) for complex z.
Complex legendre(int m, Complex z);

// ln(n!), relative accuracy ~1e-15, n <= 10^6.
double log_factorial(int n);

// Exact integer binomial coefficient, n <= 62 (fits in 64 bits).
std::uint64_t binomial(int n, int k);

// Coefficients g_0..g_m of e^{q t^2 + c t} = sum_k g_k t^k, from the
// recurrence (k+1) g_{k+1} = c g_k + 2 q g_{k-1}.  Finite and exact for any
// q, c including q = 0 or c = 0; downstream formulas use it to take their
// degenerate limits algebraically instead of nudging parameters.
std::vector<Complex> exp_quadratic_series(int m, Complex q, Complex c);

// m-th derivative of e^{q t^2 + c t} at t = 0, i.e. m! g_m.  Equals
// s^m H_m(c / (2s)) with s = sqrt(-q) on either branch.
Complex exp_quadratic_derivative(int m, Complex q, Complex c);

}  // namespace hesvs::specfun
