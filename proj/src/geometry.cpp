#include "higgsflow/geometry.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace hf {

void require_shape(const ScalarField& f, const TorusGeometry& g) {
  if (f.N != g.N || f.v.size() != g.size())
    throw ShapeMismatch("scalar field does not match the grid");
}

// ===== FFT workspace =========================================================
// One cached plan pair per grid size. FFTW_ESTIMATE keeps planning
// deterministic (FFTW_MEASURE picks algorithms by timing, which can change
// last-bit rounding between runs). Execution goes through a shared scratch
// buffer under a lock; transforms are tiny, contention is irrelevant.
namespace {

struct FftWorkspace {
  int N;
  fftw_complex* buf;
  fftw_plan fwd;
  fftw_plan bwd;

  explicit FftWorkspace(int n) : N(n) {
    buf = fftw_alloc_complex(static_cast<size_t>(N) * N);
    fwd = fftw_plan_dft_2d(N, N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(N, N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftWorkspace() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;
};

std::mutex g_fft_mutex;

FftWorkspace& workspace(int N) {
  static std::map<int, std::unique_ptr<FftWorkspace>> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, std::make_unique<FftWorkspace>(N)).first;
  return *it->second;
}

int signed_freq(int j, int N) { return j < N / 2 ? j : j - N; }

// Applies a Fourier multiplier mult(k, l) to f, where (k, l) are the signed
// frequencies of e^{i(kx + ly)} (x index fastest, matching idx = iy*N + ix).
template <class Mult>
Eigen::VectorXcd apply_symbol(const Eigen::VectorXcd& f, int N, Mult&& mult) {
  std::lock_guard<std::mutex> lock(g_fft_mutex);
  FftWorkspace& ws = workspace(N);
  const long n2 = static_cast<long>(N) * N;
  for (long i = 0; i < n2; ++i) {
    ws.buf[i][0] = f[i].real();
    ws.buf[i][1] = f[i].imag();
  }
  fftw_execute(ws.fwd);
  for (int jy = 0; jy < N; ++jy) {
    const int l = signed_freq(jy, N);
    for (int jx = 0; jx < N; ++jx) {
      const int k = signed_freq(jx, N);
      const cxd m = mult(k, l);
      const long i = static_cast<long>(jy) * N + jx;
      const cxd z = cxd(ws.buf[i][0], ws.buf[i][1]) * m;
      ws.buf[i][0] = z.real();
      ws.buf[i][1] = z.imag();
    }
  }
  fftw_execute(ws.bwd);
  Eigen::VectorXcd out(n2);
  const double inv = 1.0 / static_cast<double>(n2);
  for (long i = 0; i < n2; ++i) out[i] = cxd(ws.buf[i][0], ws.buf[i][1]) * inv;
  return out;
}

}  // namespace

// which: 0 -> d_z, 1 -> d_zbar, 2 -> box0, 3 -> inverse box0 (mean-zero).
// Shared by the scalar and matrix field front ends (see spectral_internal.hpp).
Eigen::VectorXcd spectral_apply(const Eigen::VectorXcd& f, int N, int which) {
  if (f.isZero(0.0)) return Eigen::VectorXcd::Zero(f.size());
  switch (which) {
    case 0:  // d_z = (d_x - i d_y)/2: multiplier (ik + l)/2
      return apply_symbol(f, N, [](int k, int l) { return cxd(l * 0.5, k * 0.5); });
    case 1:  // d_zbar = (d_x + i d_y)/2: multiplier (ik - l)/2
      return apply_symbol(f, N, [](int k, int l) { return cxd(-l * 0.5, k * 0.5); });
    case 2:  // box0 = -2 d_z d_zbar: multiplier (k^2 + l^2)/2
      return apply_symbol(f, N, [](int k, int l) { return cxd((k * k + l * l) * 0.5, 0.0); });
    default:  // inverse of box0 on the mean-zero complement
      return apply_symbol(f, N, [](int k, int l) {
        if (k == 0 && l == 0) return cxd(0.0, 0.0);
        return cxd(2.0 / (k * k + l * l), 0.0);
      });
  }
}

ScalarField d_prime(const ScalarField& f, const TorusGeometry& g) {
  require_shape(f, g);
  ScalarField out(g);
  out.v = spectral_apply(f.v, g.N, 0);
  return out;
}

ScalarField d_double_prime(const ScalarField& f, const TorusGeometry& g) {
  require_shape(f, g);
  ScalarField out(g);
  out.v = spectral_apply(f.v, g.N, 1);
  return out;
}

ScalarField i_lambda_contract(const ScalarField& eta, const TorusGeometry& g) {
  require_shape(eta, g);
  ScalarField out(g);
  out.v = 2.0 * eta.v;
  return out;
}

ScalarField lambda_contract(const ScalarField& eta, const TorusGeometry& g) {
  require_shape(eta, g);
  ScalarField out(g);
  out.v = cxd(0.0, -2.0) * eta.v;
  return out;
}

cxd integrate(const ScalarField& f, const TorusGeometry& g) {
  require_shape(f, g);
  return f.v.sum() * (g.volume() / static_cast<double>(g.size()));
}

double integrate_real(const ScalarField& f, const TorusGeometry& g) {
  return integrate(f, g).real();
}

ScalarField box0(const ScalarField& u, const TorusGeometry& g) {
  require_shape(u, g);
  ScalarField out(g);
  out.v = spectral_apply(u.v, g.N, 2);
  return out;
}

ScalarField solve_poisson(const ScalarField& rhs, const TorusGeometry& g) {
  require_shape(rhs, g);
  const cxd mean = rhs.v.sum() / static_cast<double>(g.size());
  const double scale = rhs.v.cwiseAbs().maxCoeff();
  if (std::abs(mean) > 1e-8 * scale)
    throw SolvabilityViolation("solve_poisson: right-hand side has nonzero mean " +
                               std::to_string(std::abs(mean)));
  ScalarField out(g);
  out.v = spectral_apply(rhs.v, g.N, 3);  // zeroing the (0,0) mode drops the mean
  return out;
}

double p1_gamma1_integral(double radial_cutoff, int radial_nodes) {
  if (!(radial_cutoff > 0.0)) throw Error("p1_gamma1_integral: cutoff must be positive");
  if (radial_nodes < 1) throw Error("p1_gamma1_integral: need at least one panel");
  // Integrand -2r/(1+r^2)^2 dr becomes -sin(2 theta) d theta under r = tan(theta);
  // composite Simpson on [0, atan(R)] then resolves the unit-scale bump no
  // matter how large the cutoff is. The angular factor int_0^1 dt equals 1.
  int panels = radial_nodes % 2 == 0 ? radial_nodes : radial_nodes + 1;
  const double a = 0.0, b = std::atan(radial_cutoff);
  const double h = (b - a) / panels;
  auto f = [](double theta) { return -std::sin(2.0 * theta); };
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * i);
  return acc * h / 3.0;
}

}  // namespace hf
