// Internal bridge between the scalar spectral kernel (geometry.cpp) and the
// matrix-field front end. Not installed; not part of the public headers.
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hf {

// which: 0 -> d_z, 1 -> d_zbar, 2 -> box0, 3 -> inverse box0 (mean-zero).
Eigen::VectorXcd spectral_apply(const Eigen::VectorXcd& f, int N, int which);

}  // namespace hf
