#pragma once

// Discrete Fourier tools for uniformly sampled functions on [0, 2π).

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

namespace mup::spectral {

namespace detail {

// FFTW planning is not thread-safe; execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class R2CPlan {
 public:
  R2CPlan(std::vector<double>& in, std::vector<std::complex<double>>& out) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(in.size()), in.data(),
                                 reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  ~R2CPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  R2CPlan(const R2CPlan&) = delete;
  R2CPlan& operator=(const R2CPlan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

class C2RPlan {
 public:
  C2RPlan(std::vector<std::complex<double>>& in, std::vector<double>& out) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(out.size()),
                                 reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                 FFTW_ESTIMATE);
  }
  ~C2RPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  C2RPlan(const C2RPlan&) = delete;
  C2RPlan& operator=(const C2RPlan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace detail

/// Normalized DFT coefficients c_k = (1/n) Σ_j f_j e^{-ik t_j}, k = 0..n/2.
inline std::vector<std::complex<double>> half_spectrum(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  detail::R2CPlan plan(in, out);
  plan.execute();
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

/// True for the slot k = n/2 of an even-length transform, shared by ±n/2.
inline bool is_nyquist(std::size_t k, std::size_t n) { return n % 2 == 0 && k == n / 2; }

/// Derivative of the trigonometric interpolant of period 2π.
inline std::vector<double> derivative(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> spec(n / 2 + 1);
  {
    detail::R2CPlan plan(in, spec);
    plan.execute();
  }
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (is_nyquist(k, n)) {
      spec[k] = 0.0;
    } else {
      spec[k] *= std::complex<double>(0.0, static_cast<double>(k)) / static_cast<double>(n);
    }
  }
  std::vector<double> out(n);
  detail::C2RPlan plan(spec, out);
  plan.execute();
  return out;
}

/// ∫_0^{2π} |f'|² dx of the trigonometric interpolant (Parseval).
inline double energy(std::span<const double> values) {
  const std::size_t n = values.size();
  const auto c = half_spectrum(values);
  double s = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double kk = static_cast<double>(k) * static_cast<double>(k);
    const double mult = is_nyquist(k, n) ? 0.5 : 2.0;  // interpolant cos(n x / 2)
    s += mult * kk * std::norm(c[k]);
  }
  return 2.0 * std::numbers::pi * s;
}

}  // namespace mup::spectral
