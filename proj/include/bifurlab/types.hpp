#pragma once

#include <complex>
#include <numbers>

namespace bifurlab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace bifurlab
