#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torus_stri/fft.hpp"
#include "torus_stri/spectrum.hpp"

namespace torus {

// State of i u_t + Laplacian u = sign |u|^2 u on an n x n grid of T^2.
// sign = +1 is defocusing, -1 focusing. The field is kept in physical
// space; samples are at x = 2 pi (a, b) / n as in sample_physical.
class NLSField {
 public:
  // f must be supported in [-cutoff, cutoff]^2; grid 0 picks the smallest
  // odd size >= 3 cutoff + 1. Throws unless grid is odd and >= 3 cutoff.
  NLSField(const WeightedSpectrum& f, std::int64_t cutoff, int sign, std::size_t grid = 0);

  std::size_t grid() const noexcept { return n_; }
  std::int64_t cutoff() const noexcept { return cutoff_; }
  int sign() const noexcept { return sign_; }
  double time() const noexcept { return t_; }
  const std::vector<Complex>& samples() const noexcept { return u_; }
  std::vector<Complex>& samples() noexcept { return u_; }

  // Normalized Fourier coefficients: u = sum_k c_k e^{ik.x}.
  WeightedSpectrum spectrum() const;

  void linear_step(double dt);
  void nonlinear_step(double dt);
  // Half linear, full nonlinear, half linear.
  void strang_step(double dt);
  // n_steps Strang steps of size dt; throws NumericalError on non-finite data.
  void advance(double dt, std::size_t n_steps);

  double mass() const;         // (2 pi)^2 mean |u|^2
  double hamiltonian() const;  // int |grad u|^2 + sign/2 int |u|^4
  double sobolev_norm(double s) const;

 private:
  void to_fourier();
  void to_physical();
  void check_finite() const;

  std::int64_t cutoff_;
  int sign_;
  std::size_t n_;
  double t_ = 0.0;
  std::vector<Complex> u_;
  std::vector<double> k2_;  // |k|^2 per DFT index
  std::shared_ptr<Fft2d> fft_;
};

// 2 pi (sum (1 + |xi|^2)^s |f(xi)|^2)^{1/2}; s in (0, 1].
double sobolev_norm(const WeightedSpectrum& f, double s);

// A e^{i (xi.x - (|xi|^2 + sign |A|^2) t)} sampled on an n-point grid.
std::vector<Complex> plane_wave(FreqPoint xi, Complex amplitude, int sign, double t, std::size_t n);

struct PlaneWaveCheck {
  FreqPoint xi{1, 0};
  double amplitude = 0.5;
  double horizon = 1.0;
  double dt = 1e-3;
};

// Max pointwise error of the solver against the closed form.
double plane_wave_error(const PlaneWaveCheck& check, int sign, std::int64_t cutoff);

struct WindowConfig {
  std::int64_t n0 = 16;
  double s = 0.4;
  double delta = 0.05;
  int sign = 1;
  double dt = 1e-3;
  int windows = 20;
  std::int64_t k_probe = 2;
  std::uint64_t seed = 1;
  std::size_t grid = 0;       // 0: smallest odd >= 3 N0 + 1
  double decay = 1.5;         // spectral decay of the random initial data
  std::optional<PlaneWaveCheck> plane_wave;
};

WindowConfig window_config_from_json(const std::string& text);
std::string window_config_to_json(const WindowConfig& config);

struct TrajectoryRow {
  double t = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double hs_norm = 0.0;
  int window_index = 0;
  double growth_factor = 1.0;
};

struct WindowReport {
  std::vector<TrajectoryRow> rows;  // initial state, then one row per window end
  std::vector<double> window_lengths;
  double k_obs = 1.0;               // max growth factor
  double cumulative_time = 0.0;
  double mass_drift = 0.0;          // max relative deviation from the initial mass
  double hamiltonian_drift = 0.0;
  bool flagged = false;             // H^s norm grew beyond 1e6 times its initial value
  std::optional<double> plane_wave_error;
};

// Random smooth data on [-N0, N0]^2 scaled to ||u0||_{L^2} = delta.
WeightedSpectrum window_initial_data(const WindowConfig& config);

// Windows of length 1 / (2 log N_k), N_k = K^k N0, k = 0..windows-1.
WindowReport window_growth_experiment(const WindowConfig& config);
WindowReport window_growth_experiment(const WeightedSpectrum& u0, const WindowConfig& config);

// CSV: "t,mass,hamiltonian,hs_norm,window_index,growth_factor".
void write_trajectory_csv(std::ostream& out, const WindowReport& report);
std::string window_summary_json(const WindowConfig& config, const WindowReport& report);

}  // namespace torus
