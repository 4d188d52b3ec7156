#include "hesvs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hesvs/specfun.hpp"

namespace hesvs {

double norm_squared(const FockState& s) {
  double acc = 0.0;
  for (const auto& c : s.amplitudes) acc += std::norm(c);
  return acc;
}

}  // namespace hesvs

namespace hesvs::oracle {

namespace {

using specfun::log_factorial;

constexpr double kSnapTolerance = 1e-15;

struct BsTrig {
  double c;  // cos(theta), transmittance
  double s;  // sin(theta), reflectance
};

BsTrig snapped_trig(double theta) {
  double c = std::cos(theta);
  double s = std::sin(theta);
  if (std::abs(c) < kSnapTolerance) c = 0.0;
  if (std::abs(s) < kSnapTolerance) s = 0.0;
  if (std::abs(c - 1.0) < kSnapTolerance) c = 1.0;
  if (std::abs(s - 1.0) < kSnapTolerance) s = 1.0;
  if (c != 0.0 && s != 0.0 && std::abs(c - s) < kSnapTolerance) {
    // Symmetric splitter: force bit-identical factors so the odd-m binomial
    // cancellation below is exact in floating point.
    c = s = std::sqrt(0.5);
  }
  return {c, s};
}

// One binomial term of <ka, kb| B |ja, jb>: t reflected photons taken from
// the first input factor.  Returns false when the term vanishes identically
// (zero base with positive power).
bool term_log(const BsTrig& bt, int ja, int jb, int ka, int kb, int t, double* log_mag,
              double* sign) {
  const int u = kb - t;
  const int c_pow = ja + kb - 2 * t;
  const int s_pow = jb - kb + 2 * t;
  if (bt.c == 0.0 && c_pow > 0) return false;
  if (bt.s == 0.0 && s_pow > 0) return false;
  double lm = log_factorial(ja) - log_factorial(t) - log_factorial(ja - t) +
              log_factorial(jb) - log_factorial(u) - log_factorial(jb - u);
  if (c_pow > 0) lm += c_pow * std::log(bt.c);
  if (s_pow > 0) lm += s_pow * std::log(bt.s);
  lm += 0.5 * (log_factorial(ka) + log_factorial(kb) - log_factorial(ja) - log_factorial(jb));
  *log_mag = lm;
  *sign = (t % 2 == 0) ? 1.0 : -1.0;
  return true;
}

double element_impl(const BsTrig& bt, int ja, int jb, int ka, int kb, bool paired) {
  if (ja < 0 || jb < 0 || ka < 0 || kb < 0)
    throw std::invalid_argument("bs_fock_element: negative photon number");
  if (ka + kb != ja + jb) return 0.0;

  const int t_lo = std::max(0, kb - jb);
  const int t_hi = std::min(ja, kb);
  if (t_lo > t_hi) return 0.0;

  const int count = t_hi - t_lo + 1;
  std::vector<double> logs(static_cast<std::size_t>(count));
  std::vector<double> signs(static_cast<std::size_t>(count));
  double max_log = -std::numeric_limits<double>::infinity();
  for (int t = t_lo; t <= t_hi; ++t) {
    double lm, sg;
    if (!term_log(bt, ja, jb, ka, kb, t, &lm, &sg)) {
      lm = -std::numeric_limits<double>::infinity();
      sg = 0.0;
    }
    logs[static_cast<std::size_t>(t - t_lo)] = lm;
    signs[static_cast<std::size_t>(t - t_lo)] = sg;
    max_log = std::max(max_log, lm);
  }
  if (!std::isfinite(max_log)) return 0.0;

  const auto value = [&](int t) {
    const auto i = static_cast<std::size_t>(t - t_lo);
    return signs[i] == 0.0 ? 0.0 : signs[i] * std::exp(logs[i] - max_log);
  };

  double acc = 0.0;
  if (paired && ja == jb) {
    // Sum t and kb - t together: at the symmetric splitter their magnitudes
    // are bit-identical and opposite-signed for odd kb, so each pair is an
    // exact floating-point zero.
    int lo = t_lo, hi = t_hi;
    while (lo < hi) {
      acc += value(lo) + value(hi);
      ++lo;
      --hi;
    }
    if (lo == hi) acc += value(lo);
  } else {
    for (int t = t_lo; t <= t_hi; ++t) acc += value(t);
  }
  return acc == 0.0 ? 0.0 : acc * std::exp(max_log);
}

}  // namespace

TruncationPolicy resolve_truncation(const ModelParams& p, TruncationPolicy requested) {
  if (requested.tail_tolerance <= 0.0)
    throw std::invalid_argument("truncation tail_tolerance must be positive");
  TruncationPolicy out = requested;
  int n = std::max({64, p.m + 2, requested.n_max});
  const double t = std::tanh(p.r);
  if (t > 0.0) {
    const double sech2 = 1.0 / (std::cosh(p.r) * std::cosh(p.r));
    const double bound = requested.tail_tolerance / sech2;
    if (bound < 1.0) {
      const int n_req = static_cast<int>(std::floor(std::log(bound) / (2.0 * std::log(t)))) + 1;
      n = std::max(n, n_req);
    }
    while (sech2 * std::pow(t, 2.0 * n) >= requested.tail_tolerance) ++n;
  }
  out.n_max = n;
  return out;
}

double bs_fock_element(double theta, int in_a, int in_b, int out_a, int out_b) {
  return element_impl(snapped_trig(theta), in_a, in_b, out_a, out_b, /*paired=*/false);
}

double bs_fock_amplitude(double theta, int n, int k, int m) {
  return element_impl(snapped_trig(theta), n, n, k, m, /*paired=*/true);
}

Conditional conditional_amplitudes(const ModelParams& p, TruncationPolicy t) {
  validate(p);
  const TruncationPolicy policy = resolve_truncation(p, t);
  const double tr = std::tanh(p.r);
  const double sech = 1.0 / std::cosh(p.r);
  const BsTrig bt = snapped_trig(p.theta);

  const int k_max = 2 * policy.n_max - p.m;
  Conditional out;
  out.state.amplitudes.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  out.state.m_parity = p.m % 2;
  out.state.n_max = k_max;

  std::vector<double> raw(static_cast<std::size_t>(k_max) + 1, 0.0);
  double p_event = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    if ((k + p.m) % 2 != 0) continue;
    const int n = (k + p.m) / 2;
    const double amp = element_impl(bt, n, n, k, p.m, /*paired=*/true);
    const double schmidt = sech * std::pow(tr, n);  // tanh^n r, 0^0 = 1
    raw[static_cast<std::size_t>(k)] = schmidt * amp;
    p_event += raw[static_cast<std::size_t>(k)] * raw[static_cast<std::size_t>(k)];
  }
  if (p_event < 1e-300)
    throw zero_probability_error(p.theta, p.r, p.m,
                                 "no Fock component survives the heralding projection");
  const double inv_norm = 1.0 / std::sqrt(p_event);
  for (int k = 0; k <= k_max; ++k)
    out.state.amplitudes[static_cast<std::size_t>(k)] = raw[static_cast<std::size_t>(k)] * inv_norm;
  out.p_event = p_event;
  return out;
}

std::vector<double> pnd(const FockState& s) {
  std::vector<double> out(s.amplitudes.size());
  for (std::size_t n = 0; n < s.amplitudes.size(); ++n) out[n] = std::norm(s.amplitudes[n]);
  return out;
}

std::complex<double> moments(const FockState& s, int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("moments: negative operator power");
  // <a^k a†^l> = sum_n conj(c_{n+l-k}) c_n sqrt((n+l)!/n!) sqrt((n+l)!/(n+l-k)!)
  const int dim = static_cast<int>(s.amplitudes.size());
  std::complex<double> acc = 0.0;
  for (int n = 0; n < dim; ++n) {
    const int nb = n + l - k;
    if (nb < 0 || nb >= dim) continue;
    if (s.amplitudes[static_cast<std::size_t>(n)] == 0.0) continue;
    const double w = std::exp(0.5 * (log_factorial(n + l) - log_factorial(n)) +
                              0.5 * (log_factorial(n + l) - log_factorial(nb)));
    acc += std::conj(s.amplitudes[static_cast<std::size_t>(nb)]) *
           s.amplitudes[static_cast<std::size_t>(n)] * w;
  }
  return acc;
}

double mean_photon(const FockState& s) { return std::real(moments(s, 1, 1)) - 1.0; }

double mandel_q(const FockState& s) {
  const double n1 = std::real(moments(s, 1, 1));  // <a a†> = <n> + 1
  const double n2 = std::real(moments(s, 2, 2));
  const double mean = n1 - 1.0;
  if (std::abs(mean) < 1e-12)
    throw std::domain_error("mandel_q undefined: conditional state has zero mean photon number");
  return (n2 - n1 * n1 - 2.0 * n1 + 1.0) / mean;
}

std::complex<double> quadrature_wavefunction(const FockState& s, double x, double phi) {
  // psi(x, phi) = sum_n c_n <x,phi|n>, <x,phi|n> = phi_n(x) e^{-i n phi} with
  // phi_n the oscillator eigenfunctions, generated by their stable recurrence.
  const int dim = static_cast<int>(s.amplitudes.size());
  const double f0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  double fm1 = 0.0;
  double fn = f0;
  std::complex<double> acc = 0.0;
  for (int n = 0; n < dim; ++n) {
    if (s.amplitudes[static_cast<std::size_t>(n)] != 0.0) {
      acc += s.amplitudes[static_cast<std::size_t>(n)] * fn * std::polar(1.0, -n * phi);
    }
    const double f_next =
        x * std::sqrt(2.0 / (n + 1.0)) * fn - std::sqrt(n / (n + 1.0)) * fm1;
    fm1 = fn;
    fn = f_next;
  }
  return acc;
}

double qcd(const FockState& s, double x, double phi) {
  return std::norm(quadrature_wavefunction(s, x, phi));
}

double wigner(const FockState& s, double x, double p) {
  // W(alpha) = (2/pi) sum_{n,n'} c_n c*_{n'} (-1)^{n'} D_{n'n}(2 alpha) with
  // D the Fock displacement matrix, beta = 2 alpha = sqrt(2) (x + i p).
  // D_{k,k+a} carries sqrt(k!/(k+a)!) |beta|^a e^{-|beta|^2/2} L_k^{(a)}(|beta|^2);
  // the prefactor is handled in the log domain, the Laguerre recurrence runs
  // in the linear domain with an overflow rescale.
  const int dim = static_cast<int>(s.amplitudes.size());
  const double b2 = 2.0 * (x * x + p * p);  // |beta|^2
  const double log_babs = (b2 > 0.0) ? 0.5 * std::log(b2) : 0.0;
  const double barg = std::atan2(p, x);

  double total = 0.0;
  for (int a = 0; a < dim; ++a) {
    if (a > 0 && b2 == 0.0) break;
    const double pf0_log = (a == 0 ? 0.0 : a * log_babs) - 0.5 * b2 - 0.5 * log_factorial(a);
    double pf = std::exp(pf0_log);
    if (pf == 0.0) continue;
    const std::complex<double> rot = std::polar(1.0, a * barg);  // e^{i a arg(beta)}
    double lkm1 = 0.0;
    double lk = 1.0;  // L_0^{(a)}
    for (int k = 0; k + a < dim; ++k) {
      if (k > 0) {
        const double lk1 =
            ((2.0 * (k - 1) + a + 1.0 - b2) * lk - (k - 1 + a) * lkm1) / static_cast<double>(k);
        lkm1 = lk;
        lk = lk1;
        if (std::abs(lk) > 1e250) {
          lk *= 1e-250;
          lkm1 *= 1e-250;
          pf *= 1e250;
        }
        pf *= std::sqrt(static_cast<double>(k) / static_cast<double>(k + a));
      }
      const std::complex<double> cross = s.amplitudes[static_cast<std::size_t>(k)] *
                                         std::conj(s.amplitudes[static_cast<std::size_t>(k + a)]);
      if (cross == 0.0) continue;
      const double angular = (a == 0) ? cross.real() : 2.0 * std::real(cross * rot);
      const double parity = ((k + a) % 2 == 0) ? 1.0 : -1.0;
      total += parity * angular * pf * lk;
    }
  }
  return 2.0 / std::numbers::pi * total;
}

double husimi(const FockState& s, double x, double p) {
  const int dim = static_cast<int>(s.amplitudes.size());
  const std::complex<double> beta_conj(x / std::sqrt(2.0), -p / std::sqrt(2.0));
  const double b2 = std::norm(beta_conj);
  std::complex<double> term = std::exp(-0.5 * b2);  // e^{-|beta|^2/2} beta*^n / sqrt(n!)
  std::complex<double> acc = 0.0;
  for (int n = 0; n < dim; ++n) {
    acc += s.amplitudes[static_cast<std::size_t>(n)] * term;
    term *= beta_conj / std::sqrt(n + 1.0);
  }
  return std::norm(acc) / std::numbers::pi;
}

}  // namespace hesvs::oracle
