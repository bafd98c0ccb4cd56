#pragma once

// Periodic pseudo-spectral integrator for u_t + u_7x + N(u) = 0 on [0, L).
// The linear symbol i k^7 is treated exactly (ETDRK4 or integrating-factor RK4); the seven
// nonlinear products are formed on a zero-padded grid and truncated back.

#include "kk7/model/kdv7.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

using cplx = std::complex<double>;

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<cplx[], FftwFree>;

inline RealBuffer real_buffer(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
inline ComplexBuffer complex_buffer(std::size_t n) {
  return ComplexBuffer(reinterpret_cast<cplx*>(fftw_alloc_complex(n)));
}
inline fftw_complex* raw(const ComplexBuffer& b) { return reinterpret_cast<fftw_complex*>(b.get()); }

struct PlanFree {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanFree>;

inline std::vector<cplx> transform(const std::vector<cplx>& in, int sign) {
  if (!is_power_of_two(in.size())) throw std::invalid_argument("dft: length must be a power of two");
  const int n = static_cast<int>(in.size());
  ComplexBuffer a = complex_buffer(in.size()), b = complex_buffer(in.size());
  Plan plan(fftw_plan_dft_1d(n, raw(a), raw(b), sign, FFTW_ESTIMATE));
  std::copy(in.begin(), in.end(), a.get());
  fftw_execute(plan.get());
  return {b.get(), b.get() + in.size()};
}

}  // namespace detail

/// X_k = sum_j x_j exp(-2 pi i j k / n).
inline std::vector<cplx> dft(const std::vector<cplx>& x) { return detail::transform(x, FFTW_FORWARD); }

/// x_j = (1/n) sum_k X_k exp(2 pi i j k / n).
inline std::vector<cplx> idft(const std::vector<cplx>& X) {
  auto x = detail::transform(X, FFTW_BACKWARD);
  for (auto& v : x) v /= static_cast<double>(X.size());
  return x;
}

inline std::vector<cplx> dft(const std::vector<double>& x) { return dft(std::vector<cplx>(x.begin(), x.end())); }

struct GridState {
  std::size_t n = 0;
  double length = 0;
  std::vector<double> values;  // u(x_j), x_j = j L / n
  double time = 0;

  double x(std::size_t j) const { return length * static_cast<double>(j) / static_cast<double>(n); }

  void validate() const {
    if (n < 16 || !is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two >= 16");
    if (!(length > 0)) throw std::invalid_argument("domain length must be positive");
    if (values.size() != n) throw std::invalid_argument("grid state has the wrong number of samples");
    for (double v : values)
      if (!std::isfinite(v)) throw std::invalid_argument("grid state has non-finite samples");
  }

  static GridState sample(std::size_t n, double length, const std::function<double(double)>& f, double time = 0) {
    GridState s{n, length, std::vector<double>(n), time};
    for (std::size_t j = 0; j < n; ++j) s.values[j] = f(s.x(j));
    s.validate();
    return s;
  }
};

enum class TimeScheme { EtdRk4, IfRk4 };

inline const char* scheme_name(TimeScheme s) { return s == TimeScheme::EtdRk4 ? "etd-rk4" : "if-rk4"; }

inline TimeScheme scheme_from_name(std::string_view s) {
  if (s == "etd-rk4") return TimeScheme::EtdRk4;
  if (s == "if-rk4") return TimeScheme::IfRk4;
  throw std::invalid_argument("unknown time scheme '" + std::string(s) + "' (expected etd-rk4 or if-rk4)");
}

struct SimConfig {
  PdeCoefficients coefficients;
  double dt = 1e-7;
  double final_time = 0;
  double dealias = 2.5;  // padded grid / spectral grid
  TimeScheme scheme = TimeScheme::EtdRk4;

  void validate() const {
    if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
    if (!(final_time >= 0)) throw std::invalid_argument("final time must be non-negative");
    if (!(dealias >= 2.5)) throw std::invalid_argument("padding ratio must be at least 5/2 for the quartic terms");
  }
};

/// Spectral operators on one grid: derivatives, the dealiased nonlinear term and the
/// exponential step coefficients. Spectra are half-complex (n/2 + 1 modes, Nyquist kept at 0).
class SpectralOperator {
 public:
  SpectralOperator(std::size_t n, double length, const PdeCoefficients& k, double dealias)
      : n_(n), modes_(n / 2 + 1), length_(length) {
    if (n < 16 || !is_power_of_two(n)) throw std::invalid_argument("grid size must be a power of two >= 16");
    m_ = static_cast<std::size_t>(std::ceil(dealias * static_cast<double>(n) / 2.0)) * 2;
    pmodes_ = m_ / 2 + 1;
    for (std::size_t j = 0; j < 7; ++j) coeff_[j] = k[j].re().get_d();
    if (!std::all_of(k.c.begin(), k.c.end(), [](const auto& c) { return sgn(c.im()) == 0; }))
      throw std::invalid_argument("simulation needs real coefficients");
    wave_.resize(modes_);
    for (std::size_t q = 0; q < modes_; ++q) wave_[q] = 2 * M_PI * static_cast<double>(q) / length;
    real_n_ = detail::real_buffer(n_);
    spec_n_ = detail::complex_buffer(modes_);
    fwd_n_.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_n_.get(), detail::raw(spec_n_), FFTW_ESTIMATE));
    bwd_n_.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n_), detail::raw(spec_n_), real_n_.get(), FFTW_ESTIMATE));
    pspec_ = detail::complex_buffer(pmodes_);
    for (auto& d : deriv_) d = detail::real_buffer(m_);
    prod_ = detail::real_buffer(m_);
    fwd_m_.reset(fftw_plan_dft_r2c_1d(static_cast<int>(m_), prod_.get(), detail::raw(pspec_), FFTW_ESTIMATE));
    bwd_m_.reset(fftw_plan_dft_c2r_1d(static_cast<int>(m_), detail::raw(pspec_), deriv_[0].get(), FFTW_ESTIMATE));
  }

  std::size_t size() const { return n_; }
  std::size_t modes() const { return modes_; }
  std::size_t padded_size() const { return m_; }
  double length() const { return length_; }
  double wavenumber(std::size_t q) const { return wave_[q]; }

  /// Linear symbol of -u_7x: -(ik)^7 = i k^7.
  cplx linear_symbol(std::size_t q) const { return {0.0, std::pow(wave_[q], 7)}; }

  std::vector<cplx> forward(const std::vector<double>& u) const {
    std::copy(u.begin(), u.end(), real_n_.get());
    fftw_execute(fwd_n_.get());
    std::vector<cplx> out(spec_n_.get(), spec_n_.get() + modes_);
    out.back() = 0;  // Nyquist
    return out;
  }

  std::vector<double> backward(const std::vector<cplx>& v) const {
    std::copy(v.begin(), v.end(), spec_n_.get());
    fftw_execute(bwd_n_.get());
    std::vector<double> out(real_n_.get(), real_n_.get() + n_);
    for (auto& x : out) x /= static_cast<double>(n_);
    return out;
  }

  std::vector<double> derivative(const std::vector<double>& u, int order) const {
    auto v = forward(u);
    for (std::size_t q = 0; q < modes_; ++q) v[q] *= std::pow(cplx(0, wave_[q]), order);
    return backward(v);
  }

  /// Spectrum of -N(u), dealiased.
  std::vector<cplx> nonlinear(const std::vector<cplx>& v) const {
    const double scale = 1.0 / static_cast<double>(n_);
    for (int order = 0; order <= 5; ++order) {
      cplx* p = pspec_.get();
      for (std::size_t q = 0; q < modes_; ++q) p[q] = v[q] * ik_pow(q, order) * scale;
      p[modes_ - 1] = 0;
      std::fill(p + modes_, p + pmodes_, cplx(0));
      fftw_execute_dft_c2r(bwd_m_.get(), detail::raw(pspec_), deriv_[order].get());
    }
    const double* u0 = deriv_[0].get();
    const double* u1 = deriv_[1].get();
    const double* u2 = deriv_[2].get();
    const double* u3 = deriv_[3].get();
    const double* u4 = deriv_[4].get();
    const double* u5 = deriv_[5].get();
    const double* c = coeff_;
    double* out = prod_.get();
    for (std::size_t j = 0; j < m_; ++j) {
      const double u = u0[j], ux = u1[j];
      out[j] = -(c[0] * u * u * u * ux + c[1] * ux * ux * ux + c[2] * u * ux * u2[j] + c[3] * u * u * u3[j] +
                 c[4] * u2[j] * u3[j] + c[5] * ux * u4[j] + c[6] * u * u5[j]);
    }
    fftw_execute_dft_r2c(fwd_m_.get(), out, detail::raw(pspec_));
    std::vector<cplx> res(pspec_.get(), pspec_.get() + modes_);
    const double back = static_cast<double>(n_) / static_cast<double>(m_);
    for (auto& r : res) r *= back;
    res.back() = 0;
    return res;
  }

 private:
  cplx ik_pow(std::size_t q, int order) const {
    const double k = wave_[q];
    switch (order & 3) {
      case 0: return {std::pow(k, order), 0};
      case 1: return {0, std::pow(k, order)};
      case 2: return {-std::pow(k, order), 0};
      default: return {0, -std::pow(k, order)};
    }
  }

  std::size_t n_, modes_, m_ = 0, pmodes_ = 0;
  double length_;
  double coeff_[7] = {};
  std::vector<double> wave_;
  detail::RealBuffer real_n_, prod_;
  detail::ComplexBuffer spec_n_, pspec_;
  detail::RealBuffer deriv_[6];
  detail::Plan fwd_n_, bwd_n_, fwd_m_, bwd_m_;
};

/// -N(u) at the grid points (the u_7x term is left to the integrator).
inline std::vector<double> rhs_eval(const GridState& s, const SimConfig& cfg) {
  s.validate();
  SpectralOperator op(s.n, s.length, cfg.coefficients, cfg.dealias);
  return op.backward(op.nonlinear(op.forward(s.values)));
}

/// -u_7x at the grid points.
inline std::vector<double> linear_part(const GridState& s) {
  SpectralOperator op(s.n, s.length, PdeCoefficients{}, 2.5);
  auto d = op.derivative(s.values, 7);
  for (auto& x : d) x = -x;
  return d;
}

namespace detail {

// phi-function coefficients of ETDRK4 by contour averaging around z = L h.
struct EtdCoefficients {
  std::vector<cplx> e, e2, q, f1, f2, f3;

  EtdCoefficients(const SpectralOperator& op, double h) {
    const std::size_t modes = op.modes();
    e.resize(modes), e2.resize(modes), q.resize(modes), f1.resize(modes), f2.resize(modes), f3.resize(modes);
    constexpr int kPoints = 64;
    for (std::size_t k = 0; k < modes; ++k) {
      const cplx lh = op.linear_symbol(k) * h;
      e[k] = std::exp(lh);
      e2[k] = std::exp(lh / 2.0);
      cplx sq = 0, s1 = 0, s2 = 0, s3 = 0;
      for (int j = 0; j < kPoints; ++j) {
        const cplx z = lh + std::polar(1.0, 2 * M_PI * (j + 0.5) / kPoints);
        const cplx ez = std::exp(z), ez2 = std::exp(z / 2.0), z3 = z * z * z;
        sq += (ez2 - 1.0) / z;
        s1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        s2 += (2.0 + z + ez * (z - 2.0)) / z3;
        s3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      q[k] = h * sq / double(kPoints);
      f1[k] = h * s1 / double(kPoints);
      f2[k] = h * s2 / double(kPoints);
      f3[k] = h * s3 / double(kPoints);
    }
  }
};

inline bool finite(const std::vector<cplx>& v) {
  for (const auto& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e200) return false;
  return true;
}

}  // namespace detail

struct Diagnostics {
  double time = 0;
  double mass = 0;      // (L/n) sum u
  double l2 = 0;        // sqrt((L/n) sum u^2)
  double max_error = std::nan("");  // against the reference, when given
};

using Reference = std::function<double(double x, double t)>;

inline Diagnostics diagnostics(const GridState& s, const Reference& reference = {}) {
  Diagnostics d;
  d.time = s.time;
  const double dx = s.length / static_cast<double>(s.n);
  double sum = 0, sq = 0;
  for (double v : s.values) sum += v, sq += v * v;
  d.mass = sum * dx;
  d.l2 = std::sqrt(sq * dx);
  if (reference) {
    d.max_error = 0;
    for (std::size_t j = 0; j < s.n; ++j)
      d.max_error = std::max(d.max_error, std::abs(s.values[j] - reference(s.x(j), s.time)));
  }
  return d;
}

/// Advances to cfg.final_time in ceil(T / dt) equal steps. The observer, if set, is called
/// with the state every `observe_every` steps and at the end.
inline GridState integrate(const GridState& initial, const SimConfig& cfg,
                           const std::function<void(const GridState&)>& observer = {}, long observe_every = 0) {
  initial.validate();
  cfg.validate();
  GridState s = initial;
  const double span = cfg.final_time;
  if (span == 0) {
    if (observer) observer(s);
    return s;
  }
  const long steps = static_cast<long>(std::ceil(span / cfg.dt - 1e-9));
  const double h = span / static_cast<double>(steps);
  SpectralOperator op(s.n, s.length, cfg.coefficients, cfg.dealias);
  detail::EtdCoefficients etd(op, h);
  const std::size_t modes = op.modes();
  std::vector<cplx> v = op.forward(s.values);
  std::vector<cplx> a(modes), b(modes), c(modes);
  auto N = [&](const std::vector<cplx>& x) { return op.nonlinear(x); };
  auto emit = [&](long step) {
    s.values = op.backward(v);
    s.time = initial.time + span * static_cast<double>(step) / static_cast<double>(steps);
    observer(s);
  };
  if (observer) observer(s);
  for (long step = 1; step <= steps; ++step) {
    auto nv = N(v);
    if (cfg.scheme == TimeScheme::EtdRk4) {
      for (std::size_t k = 0; k < modes; ++k) a[k] = etd.e2[k] * v[k] + etd.q[k] * nv[k];
      auto na = N(a);
      for (std::size_t k = 0; k < modes; ++k) b[k] = etd.e2[k] * v[k] + etd.q[k] * na[k];
      auto nb = N(b);
      for (std::size_t k = 0; k < modes; ++k) c[k] = etd.e2[k] * a[k] + etd.q[k] * (2.0 * nb[k] - nv[k]);
      auto nc = N(c);
      for (std::size_t k = 0; k < modes; ++k)
        v[k] = etd.e[k] * v[k] + etd.f1[k] * nv[k] + 2.0 * etd.f2[k] * (na[k] + nb[k]) + etd.f3[k] * nc[k];
    } else {
      for (std::size_t k = 0; k < modes; ++k) a[k] = etd.e2[k] * (v[k] + 0.5 * h * nv[k]);
      auto na = N(a);
      for (std::size_t k = 0; k < modes; ++k) b[k] = etd.e2[k] * v[k] + 0.5 * h * na[k];
      auto nb = N(b);
      for (std::size_t k = 0; k < modes; ++k) c[k] = etd.e[k] * v[k] + etd.e2[k] * h * nb[k];
      auto nc = N(c);
      for (std::size_t k = 0; k < modes; ++k)
        v[k] = etd.e[k] * v[k] + h / 6.0 * (etd.e[k] * nv[k] + 2.0 * etd.e2[k] * (na[k] + nb[k]) + nc[k]);
    }
    if (!detail::finite(v))
      throw SimulationError("simulation blew up at step " + std::to_string(step) + " (t = " +
                                std::to_string(initial.time + h * static_cast<double>(step)) + ")",
                            step);
    if (observer && observe_every > 0 && step % observe_every == 0 && step != steps) emit(step);
  }
  s.values = op.backward(v);
  s.time = initial.time + span;
  if (observer) observer(s);
  return s;
}

/// integrate with the step halved after each blow-up (at most `retries` times).
inline GridState integrate_with_retry(const GridState& initial, SimConfig cfg, int retries = 3,
                                      const std::function<void(const std::string&)>& log = {}) {
  for (int attempt = 0;; ++attempt) {
    try {
      return integrate(initial, cfg);
    } catch (const SimulationError& e) {
      if (attempt >= retries) throw;
      if (log) log(std::string(e.what()) + "; retrying with dt = " + std::to_string(cfg.dt / 2));
      cfg.dt /= 2;
    }
  }
}

/// True when the equation has a flux form, so that the mass (1/n) sum u L is a conserved
/// quantity; otherwise a reported mass drift is a diagnostic only.
inline bool conserves_mass(const PdeCoefficients& k) { return flux_decompose(k).has_value(); }

struct RefinementLevel {
  double dt = 0;
  double error = 0;  // max-norm at the final time
};

/// Runs the configuration at dt, dt/2, ..., dt/2^(levels-1). Errors are taken against the
/// reference at the final time, or, without a reference, against a run with a further 16x
/// smaller step (temporal error only).
inline std::vector<RefinementLevel> refinement_study(const GridState& initial, SimConfig cfg, int levels,
                                                     const Reference& reference = {}) {
  std::vector<double> target(initial.n);
  if (reference) {
    for (std::size_t j = 0; j < initial.n; ++j) target[j] = reference(initial.x(j), initial.time + cfg.final_time);
  } else {
    SimConfig fine = cfg;
    fine.dt = cfg.dt / std::pow(2.0, levels + 3);
    target = integrate(initial, fine).values;
  }
  std::vector<RefinementLevel> out;
  for (int l = 0; l < levels; ++l, cfg.dt /= 2) {
    auto s = integrate(initial, cfg);
    RefinementLevel r{cfg.dt, 0};
    for (std::size_t j = 0; j < s.n; ++j) r.error = std::max(r.error, std::abs(s.values[j] - target[j]));
    out.push_back(r);
  }
  return out;
}

inline void write_series_csv(std::ostream& os, const std::vector<Diagnostics>& rows) {
  os << "t,mass,l2,max_error\n";
  os.precision(17);
  for (const auto& r : rows) os << r.time << ',' << r.mass << ',' << r.l2 << ',' << r.max_error << '\n';
}

inline void write_state_csv(std::ostream& os, const GridState& s) {
  os << "x,u\n";
  os.precision(17);
  for (std::size_t j = 0; j < s.n; ++j) os << s.x(j) << ',' << s.values[j] << '\n';
}

}  // namespace kk7
