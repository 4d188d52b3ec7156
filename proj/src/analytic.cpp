#include "hesvs/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hesvs/specfun.hpp"

namespace hesvs::analytic {

namespace {

using specfun::exp_quadratic_series;
using specfun::legendre;
using specfun::log_factorial;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Accumulates sum_i s_i exp(l_i) without leaving the representable range.
class SignedLogSum {
 public:
  void add(double log_mag, double sign) {
    if (sign == 0.0 || log_mag == kNegInf) return;
    logs_.push_back(log_mag);
    signs_.push_back(sign);
    max_log_ = std::max(max_log_, log_mag);
  }

  bool empty() const { return logs_.empty(); }

  // (sign, log|sum|); sign 0 means the sum cancelled to exactly zero.
  std::pair<double, double> signed_log() const {
    if (logs_.empty()) return {0.0, kNegInf};
    double acc = 0.0;
    for (std::size_t i = 0; i < logs_.size(); ++i)
      acc += signs_[i] * std::exp(logs_[i] - max_log_);
    if (acc == 0.0) return {0.0, kNegInf};
    return {acc > 0.0 ? 1.0 : -1.0, max_log_ + std::log(std::abs(acc))};
  }

  double value() const {
    const auto [sign, lg] = signed_log();
    return sign == 0.0 ? 0.0 : sign * std::exp(lg);
  }

 private:
  std::vector<double> logs_;
  std::vector<double> signs_;
  double max_log_ = kNegInf;
};

// log p(m); throws zero_probability_error when no term survives.
double event_probability_log(const DerivedParams& d, double r, int m) {
  const double log_b1_half = d.b1 > 0.0 ? std::log(0.5 * d.b1) : kNegInf;
  const double log_b2 = d.b2 > 0.0 ? std::log(d.b2) : kNegInf;
  SignedLogSum sum;
  for (int a = 0; 2 * a <= m; ++a) {
    const int pow_b1 = 2 * a;      // power of b1/2
    const int pow_b2 = m - 2 * a;  // power of b2
    if (pow_b1 > 0 && log_b1_half == kNegInf) continue;
    if (pow_b2 > 0 && log_b2 == kNegInf) continue;
    const double lm = pow_b1 * (pow_b1 > 0 ? log_b1_half : 0.0) +
                      pow_b2 * (pow_b2 > 0 ? log_b2 : 0.0) - 2.0 * log_factorial(a) -
                      log_factorial(m - 2 * a);
    sum.add(lm, 1.0);
  }
  if (sum.empty()) {
    const std::string why = (d.mu == 0.0 && d.nu == 0.0)
                                ? "no photons reach the output channels at r = 0"
                                : "symmetric beam splitter heralds only even counts";
    throw zero_probability_error(std::numeric_limits<double>::quiet_NaN(), r, m, why);
  }
  const auto [sign, log_sum] = sum.signed_log();
  (void)sign;  // all terms are positive
  return log_factorial(m) + log_sum - 0.5 * std::log(d.a) - 2.0 * std::log(std::cosh(r));
}

std::complex<double> int_pow(std::complex<double> z, int m) {
  std::complex<double> acc = 1.0;
  for (int i = 0; i < m; ++i) acc *= z;
  return acc;
}

// Dense series in (s, t, x, y) with per-variable degree caps; coefficients
// of exp(quadratic form) are built by repeated multiplication.
class Series4 {
 public:
  Series4(int ds, int dt, int dx, int dy)
      : ds_(ds), dt_(dt), dx_(dx), dy_(dy),
        coeff_(static_cast<std::size_t>((ds + 1) * (dt + 1) * (dx + 1) * (dy + 1)), 0.0) {}

  double& at(int is, int it, int ix, int iy) {
    return coeff_[index(is, it, ix, iy)];
  }
  double at(int is, int it, int ix, int iy) const { return coeff_[index(is, it, ix, iy)]; }

  struct Monomial {
    int s, t, x, y;
    double c;
  };

  // this += src * monomial, truncating above the caps.
  void add_scaled_shift(const Series4& src, const Monomial& mono) {
    for (int is = 0; is + mono.s <= ds_; ++is)
      for (int it = 0; it + mono.t <= dt_; ++it)
        for (int ix = 0; ix + mono.x <= dx_; ++ix)
          for (int iy = 0; iy + mono.y <= dy_; ++iy) {
            const double v = src.at(is, it, ix, iy);
            if (v != 0.0) at(is + mono.s, it + mono.t, ix + mono.x, iy + mono.y) += v * mono.c;
          }
  }

  void scale(double f) {
    for (auto& v : coeff_) v *= f;
  }

  bool all_zero() const {
    for (const auto& v : coeff_)
      if (v != 0.0) return false;
    return true;
  }

  void accumulate(const Series4& other) {
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
  }

 private:
  std::size_t index(int is, int it, int ix, int iy) const {
    return static_cast<std::size_t>(((is * (dt_ + 1) + it) * (dx_ + 1) + ix) * (dy_ + 1) + iy);
  }
  int ds_, dt_, dx_, dy_;
  std::vector<double> coeff_;
};

double wigner_impl(const Context& c, double x, double p, bool alternating) {
  const DerivedParams& d = c.d;
  const int m = c.params.m;
  const Complex alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
  const Complex big_r = wigner_aux(d, alpha);

  const auto g = exp_quadratic_series(m, Complex(-0.5 * d.b1, 0.0), big_r);
  const double log_b2 = d.b2 > 0.0 ? std::log(d.b2) : kNegInf;
  SignedLogSum sum;
  for (int l = 0; l <= m; ++l) {
    if (l > 0 && log_b2 == kNegInf) break;
    const double mag2 = std::norm(g[static_cast<std::size_t>(m - l)]);
    if (mag2 == 0.0) continue;
    double sign = (l % 2 == 0) ? 1.0 : -1.0;
    if (alternating && (m - l) % 2 != 0) sign = -sign;
    sum.add((l > 0 ? l * log_b2 : 0.0) - log_factorial(l) + std::log(mag2), sign);
  }
  const auto [sign, log_sum] = sum.signed_log();
  if (sign == 0.0) return 0.0;

  const double envelope = -d.xi * (x * x + p * p) + (2.0 * d.mu / d.a) * (x * x - p * p);
  const double log_w = std::numbers::ln2 + log_factorial(m) - std::log(std::numbers::pi) -
                       c.log_p_event - 2.0 * std::log(std::cosh(c.params.r)) -
                       0.5 * std::log(d.a) + envelope + log_sum;
  return sign * std::exp(log_w);
}

}  // namespace

Context make_context(const ModelParams& p) {
  Context c;
  c.params = p;
  c.d = derive(p);
  try {
    c.log_p_event = event_probability_log(c.d, p.r, p.m);
  } catch (const zero_probability_error&) {
    throw zero_probability_error(p.theta, p.r, p.m, "event probability vanishes");
  }
  c.p_event = std::exp(c.log_p_event);
  return c;
}

double event_probability(const DerivedParams& d, double r, int m) {
  return std::exp(event_probability_log(d, r, m));
}

std::optional<double> event_probability_legendre(const DerivedParams& d, double r, int m,
                                                 bool flip_branch) {
  if (std::abs(d.b3) < 1e-12) return std::nullopt;
  Complex z = std::sqrt(Complex(d.b3, 0.0));
  if (flip_branch) z = -z;
  const Complex val = int_pow(z, m) * legendre(m, d.b2 / z);
  return std::real(val) / (std::sqrt(d.a) * std::cosh(r) * std::cosh(r));
}

std::optional<double> event_probability_legendre_split(const DerivedParams& d, double r, int m) {
  if (std::abs(d.b3) < 1e-12 || !d.b4_finite) return std::nullopt;
  const Complex z3 = std::sqrt(Complex(d.b3, 0.0));
  const Complex z4 = std::sqrt(Complex(d.b4, 0.0));
  const Complex val = int_pow(-z3, m) * legendre(m, z4);
  return std::real(val) / (std::sqrt(d.a) * std::cosh(r) * std::cosh(r));
}

Complex fock_amplitude(const Context& c, int n) {
  if (n < 0) throw std::invalid_argument("fock_amplitude: negative photon number");
  const int m = c.params.m;
  if ((n + m) % 2 != 0) return 0.0;

  const DerivedParams& d = c.d;
  const double log_mu_half = d.mu > 0.0 ? std::log(0.5 * d.mu) : kNegInf;
  const double log_abs_nu = d.nu != 0.0 ? std::log(std::abs(d.nu)) : kNegInf;
  const double nu_sign = d.nu < 0.0 ? -1.0 : 1.0;

  SignedLogSum sum;
  for (int g = m % 2; g <= std::min(m, n); g += 2) {
    const int mu_pow = (m + n - 2 * g) / 2;
    if (mu_pow > 0 && log_mu_half == kNegInf) continue;
    if (g > 0 && log_abs_nu == kNegInf) continue;
    const double lm = mu_pow * (mu_pow > 0 ? log_mu_half : 0.0) +
                      g * (g > 0 ? log_abs_nu : 0.0) - log_factorial((n - g) / 2) -
                      log_factorial((m - g) / 2) - log_factorial(g);
    double sign = (((m - g) / 2) % 2 == 0) ? 1.0 : -1.0;
    if (g % 2 != 0) sign *= nu_sign;
    sum.add(lm, sign);
  }
  const auto [sign, log_sum] = sum.signed_log();
  if (sign == 0.0) return 0.0;
  const double log_amp = 0.5 * (log_factorial(m) + log_factorial(n)) - 0.5 * c.log_p_event -
                         std::log(std::cosh(c.params.r)) + log_sum;
  return Complex(sign * std::exp(log_amp), 0.0);
}

double pnd(const Context& c, int n) { return std::norm(fock_amplitude(c, n)); }

FockState fock_state(const Context& c, int n_max) {
  FockState s;
  s.amplitudes.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) s.amplitudes[static_cast<std::size_t>(n)] = fock_amplitude(c, n);
  s.m_parity = c.params.m % 2;
  s.n_max = n_max;
  return s;
}

Complex moments(const Context& c, int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("moments: negative operator power");
  if (k + l > 8) throw std::domain_error("moments: k + l above supported degree 8");
  const DerivedParams& d = c.d;
  const int m = c.params.m;

  const std::vector<Series4::Monomial> quad = {
      {2, 0, 0, 0, -0.5 * d.b1}, {0, 2, 0, 0, -0.5 * d.b1}, {1, 1, 0, 0, d.b2},
      {1, 0, 1, 0, d.mu * d.nu / d.a}, {0, 1, 0, 1, d.mu * d.nu / d.a},
      {1, 0, 0, 1, d.nu / d.a},        {0, 1, 1, 0, d.nu / d.a},
      {0, 0, 2, 0, 0.5 * d.mu / d.a},  {0, 0, 0, 2, 0.5 * d.mu / d.a},
      {0, 0, 1, 1, 1.0 / d.a}};

  Series4 result(m, m, k, l);
  Series4 term(m, m, k, l);
  result.at(0, 0, 0, 0) = 1.0;
  term.at(0, 0, 0, 0) = 1.0;
  const int j_max = m + (k + l + 1) / 2 + 1;
  for (int j = 1; j <= j_max; ++j) {
    Series4 next(m, m, k, l);
    for (const auto& mono : quad) next.add_scaled_shift(term, mono);
    next.scale(1.0 / j);
    if (next.all_zero()) break;
    result.accumulate(next);
    term = next;
  }

  const double coeff = result.at(m, m, k, l);
  if (coeff == 0.0) return 0.0;
  const double log_scale = log_factorial(m) + log_factorial(k) + log_factorial(l) -
                           c.log_p_event - 2.0 * std::log(std::cosh(c.params.r)) -
                           0.5 * std::log(d.a);
  const double value = (coeff > 0.0 ? 1.0 : -1.0) * std::exp(std::log(std::abs(coeff)) + log_scale);
  return Complex(value, 0.0);
}

double mean_photon(const Context& c) {
  const Complex aad = moments(c, 1, 1);
  return std::real(aad) - 1.0;
}

double mandel_q(const Context& c) {
  const double n1 = std::real(moments(c, 1, 1));
  const double n2 = std::real(moments(c, 2, 2));
  const double mean = n1 - 1.0;
  if (std::abs(mean) < 1e-12)
    throw std::domain_error("mandel_q undefined: conditional state has zero mean photon number");
  return (n2 - n1 * n1 - 2.0 * n1 + 1.0) / mean;
}

Complex quadrature_wavefunction(const Context& c, double x, double phi) {
  const PhaseParams pp = phase_params(c.d, c.params.r, phi);
  const int m = c.params.m;
  const auto g = exp_quadratic_series(m, -0.5 * pp.gamma, std::sqrt(2.0) * pp.delta * x);
  const double log_scale = 0.5 * log_factorial(m) - 0.5 * c.log_p_event;
  return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * pp.pi * x * x) *
         g[static_cast<std::size_t>(m)] * std::exp(log_scale) /
         (std::cosh(c.params.r) * std::sqrt(pp.theta));
}

double qcd(const Context& c, double x, double phi) {
  return std::norm(quadrature_wavefunction(c, x, phi));
}

double wigner(const Context& c, double x, double p) { return wigner_impl(c, x, p, false); }

double wigner_alternating_sign_variant(const Context& c, double x, double p) {
  return wigner_impl(c, x, p, true);
}

double husimi(const Context& c, double x, double p) {
  const DerivedParams& d = c.d;
  const int m = c.params.m;
  const Complex beta_conj(x / std::sqrt(2.0), -p / std::sqrt(2.0));
  const auto g = exp_quadratic_series(m, Complex(-0.5 * d.mu, 0.0), d.nu * beta_conj);
  const double log_scale = 0.5 * log_factorial(m) - 0.5 * c.log_p_event;
  const Complex amp = std::exp(-0.5 * std::norm(beta_conj) + 0.5 * d.mu * beta_conj * beta_conj) *
                      g[static_cast<std::size_t>(m)] * std::exp(log_scale) /
                      std::cosh(c.params.r);
  return std::norm(amp) / std::numbers::pi;
}

}  // namespace hesvs::analytic
