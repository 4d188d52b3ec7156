#include "hesvs/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hesvs::specfun {

namespace {

void check_order(const char* name, int m) {
  if (m < 0) throw std::invalid_argument(std::string(name) + ": negative order");
  if (m > kMaxOrder)
    throw std::invalid_argument(std::string(name) + ": order " + std::to_string(m) +
                                " above supported cap " + std::to_string(kMaxOrder));
}

void check_finite(const char* name, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument(std::string(name) + ": non-finite argument");
}

}  // namespace

Complex hermite(int m, Complex z) {
  check_order("hermite", m);
  check_finite("hermite", z);
  if (m == 0) return {1.0, 0.0};
  Complex hkm1 = 1.0;
  Complex hk = 2.0 * z;
  for (int k = 1; k < m; ++k) {
    Complex hk1 = 2.0 * z * hk - 2.0 * static_cast<double>(k) * hkm1;
    hkm1 = hk;
    hk = hk1;
  }
  return hk;
}

Complex legendre(int m, Complex z) {
  check_order("legendre", m);
  check_finite("legendre", z);
  if (m == 0) return {1.0, 0.0};
  Complex pkm1 = 1.0;
  Complex pk = z;
  for (int k = 1; k < m; ++k) {
    Complex pk1 = ((2.0 * k + 1.0) * z * pk - static_cast<double>(k) * pkm1) /
                  static_cast<double>(k + 1);
    pkm1 = pk;
    pk = pk1;
  }
  return pk;
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n > 1000000) throw std::invalid_argument("log_factorial: argument above 10^6");
  // Cumulative table for the range the sums below actually visit; lgamma
  // beyond it.
  static constexpr int kTableSize = 4096;
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    t[0] = 0.0;
    long double acc = 0.0L;
    for (int i = 1; i < kTableSize; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[i] = static_cast<double>(acc);
    }
    return t;
  }();
  if (n < kTableSize) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial: need 0 <= k <= n");
  if (n > 62) throw std::invalid_argument("binomial: n above exact-integer cap 62");
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

std::vector<Complex> exp_quadratic_series(int m, Complex q, Complex c) {
  if (m < 0) throw std::invalid_argument("exp_quadratic_series: negative order");
  check_finite("exp_quadratic_series", q);
  check_finite("exp_quadratic_series", c);
  std::vector<Complex> g(static_cast<std::size_t>(m) + 1);
  g[0] = 1.0;
  if (m >= 1) g[1] = c;
  for (int k = 1; k < m; ++k) {
    g[static_cast<std::size_t>(k) + 1] =
        (c * g[static_cast<std::size_t>(k)] + 2.0 * q * g[static_cast<std::size_t>(k) - 1]) /
        static_cast<double>(k + 1);
  }
  return g;
}

Complex exp_quadratic_derivative(int m, Complex q, Complex c) {
  check_order("exp_quadratic_derivative", m);
  const auto g = exp_quadratic_series(m, q, c);
  return g[static_cast<std::size_t>(m)] * std::exp(log_factorial(m));
}

}  // namespace hesvs::specfun
