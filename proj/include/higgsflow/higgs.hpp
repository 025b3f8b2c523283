// Higgs bundles on the torus: the Higgs field phi = Phi dz, its metric
// adjoint, the extended (Hitchin-Simpson) curvature and mean curvature, and
// the Hermitian-Yang-Mills residual.
#pragma once

#include <string>

#include "higgsflow/bundle.hpp"

namespace hf {

struct HiggsBundle {
  HolomorphicStructure hol;
  MatrixField phi;  // form_dz coefficient
  std::string label;

  HiggsBundle() = default;
  HiggsBundle(HolomorphicStructure h, MatrixField p, std::string lbl);

  int rank() const { return hol.rank; }
};

// Holomorphicity residual of phi: max |d_zbar(Phi) + [alpha, Phi]|. Must
// vanish (within 1e-8 * scale) for a valid Higgs field. On a curve phi ^ phi
// is identically zero (a single dz); in higher dimension this would be the
// commutativity constraint on the coefficients.
double higgs_holomorphicity_residual(const HiggsBundle& b, const TorusGeometry& g);
void require_valid(const HiggsBundle& b, const TorusGeometry& g);

// Adjoint coefficient M with phi-bar_h = M dzbar, defined by
// h(phibar xi, eta) = h(xi, phi eta): M = H^-1 Phi^dagger H. Invariant under
// conformal scaling of h.
MatrixField higgs_adjoint(const MatrixField& phi, const HermitianMetricField& h);

// (1,1) coefficient of the extended curvature: F_chern + [Phi, M], the
// commutator coming from phi ^ phibar + phibar ^ phi with dzbar^dz = -dz^dzbar.
// (2,0)/(0,2) parts are never materialized; the contraction kills them.
CurvatureField hs_curvature(const HiggsBundle& b, const HermitianMetricField& h,
                            const TorusGeometry& g);

// K = i Lambda R = 2 * (1,1) coefficient; h-selfadjoint endomorphism.
MatrixField mean_curvature(const HiggsBundle& b, const HermitianMetricField& h,
                           const TorusGeometry& g);

struct HymResidual {
  MatrixField field;  // K - c I
  NormTriple norms;
};

// K - cI and its norms; h is epsilon-approximate-HYM iff norms.linf < epsilon.
HymResidual hym_residual(const HiggsBundle& b, const HermitianMetricField& h, double c,
                         const TorusGeometry& g);

}  // namespace hf
