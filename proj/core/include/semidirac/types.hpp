#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace semidirac {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMat2 = Eigen::Matrix<Complex, 2, 2>;
using CMat4 = Eigen::Matrix<Complex, 4, 4>;
using CVec2 = Eigen::Matrix<Complex, 2, 1>;

/// Physical constants in a natural unit system. `e` is the signed charge and
/// `hbar` plays the role of the semiclassical expansion parameter.
struct PhysConstants {
  double m = 1.0;
  double c = 1.0;
  double e = 1.0;
  double hbar = 1.0;

  /// Throws PreconditionError unless m > 0, c > 0, hbar >= 0 and all finite.
  void validate() const;

  [[nodiscard]] PhysConstants with_hbar(double h) const {
    PhysConstants k = *this;
    k.hbar = h;
    return k;
  }
};

// Error classes map onto the CLI exit codes (parse = 2, precondition = 3,
// numerical failure = 4).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relativistic kinetic energy E_p = sqrt(m^2 c^4 + p^2 c^2).
[[nodiscard]] double energy(const Vec3& p, const PhysConstants& k);

}  // namespace semidirac
