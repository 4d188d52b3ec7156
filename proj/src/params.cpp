#include "hesvs/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hesvs {

namespace {

constexpr double kSnapTolerance = 1e-15;

// Snap a sine/cosine value to the exact constant it represents when the
// angle sits on a special point (0, pi/4, pi/2 within rounding).  Keeps the
// special-case algebra exact: mu = 0 at theta in {0, pi/2}, nu = 0 at pi/4.
double snap_trig(double v) {
  if (std::abs(v) < kSnapTolerance) return 0.0;
  if (std::abs(v - 1.0) < kSnapTolerance) return 1.0;
  if (std::abs(v + 1.0) < kSnapTolerance) return -1.0;
  return v;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument("invalid parameter " + field + ": " + what);
}

}  // namespace

void validate(const ModelParams& p) {
  if (!std::isfinite(p.theta)) fail("theta", "must be finite");
  if (p.theta < 0.0 || p.theta > std::numbers::pi / 2)
    fail("theta", "must lie in [0, pi/2], got " + std::to_string(p.theta));
  if (!std::isfinite(p.r)) fail("r", "must be finite");
  if (p.r < 0.0) fail("r", "must be >= 0, got " + std::to_string(p.r));
  if (std::tanh(p.r) >= 1.0)
    fail("r", "squeezing saturates double precision (tanh r rounds to 1), got " +
                  std::to_string(p.r));
  if (p.m < 0) fail("m", "must be >= 0, got " + std::to_string(p.m));
  if (p.m > kMaxDetectedPhotons)
    fail("m", "must be <= " + std::to_string(kMaxDetectedPhotons) + ", got " +
                  std::to_string(p.m));
}

DerivedParams derive(const ModelParams& p) {
  validate(p);
  const double t = std::tanh(p.r);
  const double s2 = snap_trig(std::sin(2.0 * p.theta));
  const double c2 = snap_trig(std::cos(2.0 * p.theta));

  DerivedParams d;
  d.mu = s2 * t;
  d.nu = c2 * t;
  d.lambda = std::atanh(d.mu);
  d.a = 1.0 - d.mu * d.mu;
  const double cosh2r = std::cosh(p.r) * std::cosh(p.r);
  d.b1 = d.mu / (d.a * cosh2r);
  const double t2 = t * t;
  const double nu2 = d.nu * d.nu;
  d.b2 = nu2 / d.a;
  d.b3 = (t2 * t2 - d.mu * d.mu) / d.a;
  if (std::abs(d.b3) < 1e-300) {
    d.b4 = 0.0;
    d.b4_finite = false;
  } else {
    d.b4 = (nu2 * nu2) / ((d.a * d.a) * d.b3);
    d.b4_finite = true;
  }
  d.xi = (1.0 + d.mu * d.mu) / d.a;
  return d;
}

PhaseParams phase_params(const DerivedParams& d, double r, double phi) {
  const double t2 = std::tanh(r) * std::tanh(r);
  const Complex e2 = std::polar(1.0, -2.0 * phi);
  PhaseParams pp;
  pp.phi = phi;
  pp.theta = 1.0 + d.mu * e2;
  pp.pi = (1.0 - d.mu * e2) / pp.theta;
  pp.gamma = (d.mu + e2 * t2) / pp.theta;
  pp.delta = std::polar(1.0, -phi) * d.nu / pp.theta;
  return pp;
}

Complex wigner_aux(const DerivedParams& d, Complex alpha) {
  return 2.0 * d.nu * (alpha - d.mu * std::conj(alpha)) / d.a;
}

}  // namespace hesvs
