#pragma once

#include <stdexcept>
#include <string>

namespace hesvs {

// Raised when the requested heralding event has probability zero
// (r = 0 with m > 0, or a symmetric beam splitter with odd m).
class zero_probability_error : public std::runtime_error {
 public:
  zero_probability_error(double theta, double r, int m, const std::string& why)
      : std::runtime_error("zero-probability event (theta=" + std::to_string(theta) +
                           ", r=" + std::to_string(r) + ", m=" + std::to_string(m) +
                           "): " + why),
        theta_(theta),
        r_(r),
        m_(m) {}

  double theta() const { return theta_; }
  double r() const { return r_; }
  int m() const { return m_; }

 private:
  double theta_;
  double r_;
  int m_;
};

}  // namespace hesvs
