#include "higgsflow/flow.hpp"

#include <cmath>
#include <optional>

namespace hf {

void FlowConfig::validate() const {
  if (!(dt_initial > 0.0)) throw Error("flow config: dt_initial must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 1.0))
    throw Error("flow config: dt_safety must be in (0,1]");
  if (!(t_max >= 0.0)) throw Error("flow config: t_max must be nonnegative");
  if (!(residual_target > 0.0)) throw Error("flow config: residual_target must be positive");
  if (record_every < 1) throw Error("flow config: record_every must be >= 1");
}

namespace {

// Symmetrized copy (M + M^dag)/2, plane-vectorized.
MatrixField hermitize(const MatrixField& m) {
  MatrixField out = m;
  for (int i = 0; i < m.r; ++i) {
    out.plane(i, i) = 0.5 * (m.plane(i, i) + m.plane(i, i).conjugate());
    for (int j = i + 1; j < m.r; ++j) {
      out.plane(i, j) = 0.5 * (m.plane(i, j) + m.plane(j, i).conjugate());
      out.plane(j, i) = out.plane(i, j).conjugate();
    }
  }
  return out;
}

// dH/dt = -H (K - cI) evaluated at the (Hermitian, positive) field H.
// Throws SpectrumNotPositive if H has lost positivity.
MatrixField flow_rhs(const MatrixField& H, const HiggsBundle& bundle, const TorusGeometry& g,
                     double c) {
  HermitianMetricField h(hermitize(H));
  MatrixField dev = mean_curvature(bundle, h, g);
  if (c != 0.0) dev = dev - (cxd(c, 0.0) * identity_field(g, dev.r));
  return cxd(-1.0, 0.0) * (h.H * dev);
}

}  // namespace

FlowState make_flow_state(const HermitianMetricField& h0) {
  TorusGeometry g(h0.H.N);
  MatrixField S = zero_field(g, h0.rank(), Kind::endomorphism);
  auto range = eig_range(h0);
  return FlowState{0.0, h0, h0, std::move(S), 0.0, range.second, {}};
}

FlowState flow_step(const FlowState& state, const HiggsBundle& bundle, const TorusGeometry& g,
                    double dt, double c) {
  if (!(dt > 0.0)) throw Error("flow_step: dt must be positive");
  const MatrixField& H = state.h.H;
  double step = dt;
  std::optional<HermitianMetricField> accepted;
  for (int attempt = 0; attempt <= 20 && !accepted; ++attempt) {
    try {
      MatrixField k1 = flow_rhs(H, bundle, g, c);
      MatrixField k2 = flow_rhs(H + cxd(0.5 * step, 0.0) * k1, bundle, g, c);
      MatrixField k3 = flow_rhs(H + cxd(0.5 * step, 0.0) * k2, bundle, g, c);
      MatrixField k4 = flow_rhs(H + cxd(step, 0.0) * k3, bundle, g, c);
      MatrixField Hnew = hermitize(H + cxd(step / 6.0, 0.0) * (k1 + cxd(2.0, 0.0) * k2 +
                                                               cxd(2.0, 0.0) * k3 + k4));
      HermitianMetricField cand(std::move(Hnew));
      auto range = eig_range(cand);
      if (range.first > 1e-8 * std::max(state.eig_scale, range.second))
        accepted.emplace(std::move(cand));
      else
        step *= 0.5;  // positive but through the floor: reject
    } catch (const SpectrumNotPositive&) {
      step *= 0.5;  // a stage or the result lost positivity: reject
    }
  }
  if (!accepted)
    throw StepCollapse("flow_step: 20 consecutive halvings rejected; metric degenerating");

  auto range = eig_range(*accepted);
  FlowState next{state.t + step,
                 std::move(*accepted),
                 state.h0,
                 state.S,
                 step,
                 std::max(state.eig_scale, range.second),
                 state.diagnostics};
  next.S = mat_log_metric(next.h, next.h0);
  return next;
}

namespace {

DiagnosticsRow make_row(const FlowState& st, const HiggsBundle& bundle, const TorusGeometry& g,
                        double c) {
  DiagnosticsRow row;
  row.t = st.t;
  HymResidual res = hym_residual(bundle, st.h, c, g);
  row.K_l1 = res.norms.l1;
  row.K_l2 = res.norms.l2;
  row.K_linf = res.norms.linf;
  row.L = donaldson_closed_form(st.h, st.h0, bundle, g, c).value;
  row.trS_max = trace(st.S).v.cwiseAbs().maxCoeff();
  row.min_eig_H = eig_range(st.h).first;
  const double V = g.volume();
  const double r = static_cast<double>(st.h.rank());
  double s_l1 = norm_family(st.S, st.h, g).l1;
  row.superineq_lhs = (s_l1 / std::sqrt(r) - V * std::log(2.0 * r)) * row.K_l2;
  row.superineq_rhs = -std::sqrt(V) * row.L;
  return row;
}

}  // namespace

FlowResult run_flow(const HermitianMetricField& h0, const HiggsBundle& bundle,
                    const TorusGeometry& g, const FlowConfig& config) {
  config.validate();
  require_valid(bundle, g);
  const double parabolic_cap = config.dt_safety * g.dx() * g.dx() * 0.5;
  double dt = std::min(config.dt_initial, parabolic_cap);

  FlowResult result{make_flow_state(h0), false, 0};
  FlowState& st = result.state;
  st.diagnostics.push_back(make_row(st, bundle, g, config.c));
  double residual = st.diagnostics.back().K_linf;

  auto record = [&]() {
    if (st.diagnostics.empty() || st.diagnostics.back().t != st.t)
      st.diagnostics.push_back(make_row(st, bundle, g, config.c));
  };

  while (true) {
    if (residual < config.residual_target) {
      record();
      result.converged = true;
      return result;
    }
    if (st.t >= config.t_max) {
      record();
      result.converged = false;
      return result;
    }

    // A step is accepted only if the new state also passes the curvature
    // diagnostics: an explicit step near the stability edge can pump the
    // Nyquist modes of H without losing positivity, and the unmatched Nyquist
    // derivative then shows up as a selfadjointness defect of K. The cure is
    // the same as for positivity loss: halve and retry.
    double step = std::min(dt, config.t_max - st.t);
    for (int attempt = 0;; ++attempt) {
      FlowState cand = flow_step(st, bundle, g, step, config.c);
      try {
        residual = hym_residual(bundle, cand.h, config.c, g).norms.linf;
        st = std::move(cand);
        break;
      } catch (const SelfadjointnessViolation&) {
        if (attempt >= 20)
          throw StepCollapse("run_flow: 20 consecutive halvings rejected by diagnostics");
        step = 0.5 * std::min(step, cand.last_dt);
      }
    }
    dt = std::min(dt, st.last_dt);  // never regrow a halved step
    ++result.steps;

    auto range = eig_range(st.h);
    if (range.second > 1e12 * range.first)
      throw DivergedMetric("run_flow: metric condition number exceeded 1e12");

    if (result.steps % config.record_every == 0) record();
  }
}

HermitianMetricField conformal_normalize(const HermitianMetricField& h, const HiggsBundle& bundle,
                                         const TorusGeometry& g, double c) {
  MatrixField dev = mean_curvature(bundle, h, g);
  ScalarField tr_dev = trace(dev);
  tr_dev.v.array() -= cxd(c * h.rank(), 0.0);
  ScalarField rhs;
  rhs.N = tr_dev.N;
  rhs.v = (-1.0 / static_cast<double>(h.rank())) * tr_dev.v;
  // Mean of tr(K - cI) must vanish (degree/c compatibility); solve_poisson
  // rejects the inconsistent case.
  ScalarField u = solve_poisson(rhs, g);
  return conformal_scale(u, h);
}

}  // namespace hf
