// Donaldson heat flow  d/dt h = -(K_h - c h), realized on the metric matrix as
// d/dt H = -H (K - cI)  (H K is Hermitian, so the step preserves Hermiticity).
// Explicit RK4 with a parabolic step cap and eigenvalue-floor rejection;
// the integrator records the diagnostics series consumed by the CLI.
#pragma once

#include <vector>

#include "higgsflow/functional.hpp"

namespace hf {

struct FlowConfig {
  double dt_initial = 1e-3;
  double dt_safety = 1.0;  // in (0,1]; caps dt at dt_safety * (grid dx)^2 / 2
  double t_max = 50.0;
  double residual_target = 0.05;  // epsilon on max |K - cI|
  int record_every = 1;
  double c = 0.0;  // slope constant; 0 for every degree-0 torus entry

  void validate() const;
};

struct DiagnosticsRow {
  double t = 0.0;
  double L = 0.0;  // Donaldson functional against the initial metric
  double K_l1 = 0.0, K_l2 = 0.0, K_linf = 0.0;
  double trS_max = 0.0;    // max over grid of |tr S(t)|
  double min_eig_H = 0.0;  // min over grid of the smallest eigenvalue of H
  double superineq_lhs = 0.0, superineq_rhs = 0.0;
};

struct FlowState {
  double t = 0.0;
  HermitianMetricField h;
  HermitianMetricField h0;  // reference metric for S and L
  MatrixField S;            // mat_log_metric(h, h0)
  double last_dt = 0.0;
  double eig_scale = 0.0;  // running max eigenvalue of H, floor reference
  std::vector<DiagnosticsRow> diagnostics;
};

FlowState make_flow_state(const HermitianMetricField& h0);

// One accepted RK4 step. Internally halves dt (up to 20 times, then
// StepCollapse) whenever the candidate metric's smallest eigenvalue would
// drop below 1e-8 * the running eigenvalue scale. The dt actually used is
// left in state.last_dt.
FlowState flow_step(const FlowState& state, const HiggsBundle& bundle, const TorusGeometry& g,
                    double dt, double c);

// Integrates until max|K - cI| < residual_target or t >= t_max, recording a
// diagnostics row every record_every accepted steps (plus first and last).
// Monitors recorded alongside the norms:
//   superineq_lhs = (r^{-1/2} |S|_L1 - V log(2r)) * |K - cI|_L2
//   superineq_rhs = -sqrt(V) * L(h_t, h0)
// Throws DivergedMetric when the pointwise condition number of H passes 1e12.
struct FlowResult {
  FlowState state;
  bool converged = false;  // true: residual target reached; false: hit t_max
  long steps = 0;
};
FlowResult run_flow(const HermitianMetricField& h0, const HiggsBundle& bundle,
                    const TorusGeometry& g, const FlowConfig& config);

// Conformal trace normalization: solves box0(u) = -(1/r) tr(K - cI) and
// returns e^u h, which has pointwise tr(K - cI) = 0.
HermitianMetricField conformal_normalize(const HermitianMetricField& h, const HiggsBundle& bundle,
                                         const TorusGeometry& g, double c);

}  // namespace hf
