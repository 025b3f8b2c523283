// Shared generators for the test suites: seeded band-limited random fields
// (modes <= 2 so spectral derivatives are exact to machine precision) and
// random metrics/selfadjoint directions built from them.
#pragma once

#include <random>

#include "higgsflow/matfield.hpp"

namespace hft {

using hf::cxd;

// Real band-limited scalar: sum of a few low modes with coefficients in
// [-amp, amp]. Deterministic in rng state.
inline hf::ScalarField random_scalar(const hf::TorusGeometry& g, std::mt19937& rng,
                                     double amp = 0.3, int max_mode = 2) {
  std::uniform_real_distribution<double> U(-amp, amp);
  struct Mode {
    int k, l;
    double c, s;
  };
  std::vector<Mode> modes;
  for (int k = -max_mode; k <= max_mode; ++k)
    for (int l = -max_mode; l <= max_mode; ++l) modes.push_back({k, l, U(rng), U(rng)});
  return hf::sample_scalar(g, [&](double x, double y) {
    double v = 0.0;
    for (const Mode& m : modes) v += m.c * std::cos(m.k * x + m.l * y) + m.s * std::sin(m.k * x + m.l * y);
    return cxd(v, 0.0);
  });
}

// Complex band-limited scalar.
inline hf::ScalarField random_cscalar(const hf::TorusGeometry& g, std::mt19937& rng,
                                      double amp = 0.3, int max_mode = 2) {
  hf::ScalarField re = random_scalar(g, rng, amp, max_mode);
  hf::ScalarField im = random_scalar(g, rng, amp, max_mode);
  hf::ScalarField out = re;
  out.v += cxd(0.0, 1.0) * im.v;
  return out;
}

// Arbitrary smooth matrix field with complex band-limited entries.
inline hf::MatrixField random_matrix_field(const hf::TorusGeometry& g, int rank,
                                           hf::Kind kind, std::mt19937& rng, double amp = 0.3) {
  hf::MatrixField f(g, rank, kind);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) f.plane(i, j) = random_cscalar(g, rng, amp).v;
  return f;
}

// Pointwise-Hermitian smooth field (selfadjoint for the identity metric).
inline hf::MatrixField random_hermitian_field(const hf::TorusGeometry& g, int rank,
                                              std::mt19937& rng, double amp = 0.3) {
  hf::MatrixField f(g, rank, hf::Kind::endomorphism);
  for (int i = 0; i < rank; ++i) {
    f.plane(i, i) = random_scalar(g, rng, amp).v;
    for (int j = i + 1; j < rank; ++j) {
      f.plane(i, j) = random_cscalar(g, rng, amp).v;
      f.plane(j, i) = f.plane(i, j).conjugate();
    }
  }
  return f;
}

// Random positive metric: exp of a random Hermitian field (entrywise
// eigen-exponential through mat_exp_selfadjoint against the identity).
inline hf::HermitianMetricField random_metric(const hf::TorusGeometry& g, int rank,
                                              std::mt19937& rng, double amp = 0.3) {
  return hf::mat_exp_selfadjoint(random_hermitian_field(g, rank, rng, amp),
                                 hf::identity_metric(g, rank));
}

// Random h-selfadjoint direction: H^{-1} (Hermitian field).
inline hf::MatrixField random_selfadjoint_direction(const hf::TorusGeometry& g,
                                                    const hf::HermitianMetricField& h,
                                                    std::mt19937& rng, double amp = 0.3) {
  return hf::pointwise_inverse(h.H) * random_hermitian_field(g, h.rank(), rng, amp);
}

inline double max_diff(const hf::MatrixField& a, const hf::MatrixField& b) {
  return hf::max_abs(a - b);
}

}  // namespace hft
