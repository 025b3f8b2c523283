// Holomorphic structures on the trivial smooth bundle over the torus
// (dbar-operator dbar + alpha dzbar in one global frame), their Chern
// connections and curvature, the curvature-integral degree, and the mean
// curvature combinators for tensor products and direct sums.
#pragma once

#include <boost/rational.hpp>

#include "higgsflow/matfield.hpp"

namespace hf {

using rat = boost::rational<long long>;

struct HolomorphicStructure {
  int rank = 0;
  MatrixField alpha;  // form_dzbar coefficient of dbar_E - dbar

  HolomorphicStructure() = default;
  HolomorphicStructure(const TorusGeometry& g, MatrixField a);
  // On a curve dbar_E^2 = 0 holds for every alpha (no (0,2)-forms); kept as a
  // named check so the integrability contract is visible.
  static constexpr bool integrable = true;
};

HolomorphicStructure trivial_structure(const TorusGeometry& g, int rank);

struct CurvatureField {
  MatrixField F;  // form_dzdzbar coefficient of the full (1,1) curvature
};

// Chern connection of (dbar + alpha, h): the unique h-compatible connection
// with (0,1) part dbar + alpha. Compatibility dH = H P + A^dagger H (dz part)
// fixes P = H^-1 d_z H - H^-1 A^dagger H, and the (1,1) curvature coefficient
// is F = d_z A - d_zbar P + [P, A]. F is h-selfadjoint: (H F)^dagger = H F.
CurvatureField chern_curvature(const HolomorphicStructure& hol, const HermitianMetricField& h,
                               const TorusGeometry& g);

// The connection coefficient P above; exposed for compatibility tests.
MatrixField chern_connection_dz(const HolomorphicStructure& hol, const HermitianMetricField& h,
                                const TorusGeometry& g);

// deg = (i / 2 pi) * int tr(F) dz^dzbar = (1/pi) * int tr(F) dx dy.
// Zero for every structure on the trivial smooth bundle, independent of h.
double degree_chern_weil(const HolomorphicStructure& hol, const HermitianMetricField& h,
                         const TorusGeometry& g);

rat slope(const rat& degree, long long rank);

// Mean curvature of E1 (x) E2 in terms of the factors: K1 (x) I2 + I1 (x) K2.
MatrixField tensor_mean_curvature_combine(const MatrixField& K1, const MatrixField& K2);
// Mean curvature of E1 (+) E2: block diagonal.
MatrixField sum_mean_curvature_combine(const MatrixField& K1, const MatrixField& K2);

}  // namespace hf
