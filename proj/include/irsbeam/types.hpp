#pragma once

#include <complex>
#include <Eigen/Dense>

namespace irsbeam {

using Real = double;
using Complex = std::complex<double>;

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Propagation speed used for wavelength computations (m/s).
inline constexpr double kSpeedOfLight = 3.0e8;

}  // namespace irsbeam
