#include "torus_stri/nls.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "torus_stri/format.hpp"
#include "torus_stri/propagator.hpp"
#include "torus_stri/random.hpp"
#include "torus_stri/summation.hpp"

namespace torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTorusArea = kTwoPi * kTwoPi;

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

std::size_t default_nls_grid(std::int64_t cutoff) {
  std::size_t n = 3 * static_cast<std::size_t>(cutoff) + 1;
  if (n % 2 == 0) ++n;
  return n;
}

}  // namespace

NLSField::NLSField(const WeightedSpectrum& f, std::int64_t cutoff, int sign, std::size_t grid)
    : cutoff_(cutoff), sign_(sign) {
  if (sign != 1 && sign != -1) throw ValidationError("invalid_sign", "sign must be +1 or -1");
  if (!is_dyadic(cutoff)) throw ValidationError("not_dyadic", "cutoff N must be a power of two");
  if (f.max_abs_component() > cutoff) {
    throw ValidationError("spectrum_outside_cutoff", "initial data must be supported in [-N, N]^2");
  }
  n_ = grid ? grid : default_nls_grid(cutoff);
  if (n_ % 2 == 0 || n_ < 3 * static_cast<std::size_t>(cutoff)) {
    throw ValidationError("invalid_grid", "NLS grid must be odd and at least 3N");
  }
  u_ = sample_physical(f, n_).samples;
  k2_.resize(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      const long long ka = signed_mode(a, n_);
      const long long kb = signed_mode(b, n_);
      k2_[a * n_ + b] = static_cast<double>(ka * ka + kb * kb);
    }
  }
  fft_ = std::make_shared<Fft2d>(n_);
}

void NLSField::to_fourier() {
  fft_->forward(u_);
  // Per-entry division keeps the rounding of the mass unbiased.
  const double count = static_cast<double>(n_ * n_);
  for (auto& v : u_) v = {v.real() / count, v.imag() / count};
}

void NLSField::to_physical() { fft_->backward(u_); }

WeightedSpectrum NLSField::spectrum() const { return analyze(PhysicalGrid{n_, u_}); }

void NLSField::linear_step(double dt) {
  if (dt == 0.0) return;
  // A private plan per field keeps copies independent.
  if (fft_.use_count() > 1) fft_ = std::make_shared<Fft2d>(n_);
  to_fourier();
  for (std::size_t i = 0; i < u_.size(); ++i) u_[i] *= unit_phase(-dt * k2_[i]);
  to_physical();
}

void NLSField::nonlinear_step(double dt) {
  const double rate = static_cast<double>(sign_) * dt;
  for (auto& v : u_) v *= unit_phase(-rate * std::norm(v));
}

void NLSField::strang_step(double dt) {
  linear_step(0.5 * dt);
  nonlinear_step(dt);
  linear_step(0.5 * dt);
  t_ += dt;
}

void NLSField::check_finite() const {
  CompensatedSum s;
  for (const auto& v : u_) s += std::norm(v);
  if (!std::isfinite(s.value())) {
    throw NumericalError("non_finite_field", "solver produced a non-finite value at t = " + format_double(t_));
  }
}

void NLSField::advance(double dt, std::size_t n_steps) {
  for (std::size_t i = 0; i < n_steps; ++i) {
    strang_step(dt);
    check_finite();
  }
}

double NLSField::mass() const {
  CompensatedSum s;
  for (const auto& v : u_) s += std::norm(v);
  return kTorusArea * s.value() / static_cast<double>(u_.size());
}

double NLSField::hamiltonian() const {
  std::vector<Complex> c = u_;
  Fft2d fft(n_);
  fft.forward(c);
  const double scale = 1.0 / static_cast<double>(n_ * n_);
  CompensatedSum grad, quartic;
  for (std::size_t i = 0; i < c.size(); ++i) grad += k2_[i] * std::norm(c[i] * scale);
  for (const auto& v : u_) {
    const double m2 = std::norm(v);
    quartic += m2 * m2;
  }
  const double q = kTorusArea * quartic.value() / static_cast<double>(u_.size());
  return kTorusArea * grad.value() + 0.5 * static_cast<double>(sign_) * q;
}

double NLSField::sobolev_norm(double s) const {
  if (!(s > 0.0 && s <= 1.0)) throw ValidationError("invalid_sobolev_index", "s must lie in (0, 1]");
  std::vector<Complex> c = u_;
  Fft2d fft(n_);
  fft.forward(c);
  const double scale = 1.0 / static_cast<double>(n_ * n_);
  CompensatedSum acc;
  for (std::size_t i = 0; i < c.size(); ++i) acc += std::pow(1.0 + k2_[i], s) * std::norm(c[i] * scale);
  return kTwoPi * std::sqrt(acc.value());
}

double sobolev_norm(const WeightedSpectrum& f, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw ValidationError("invalid_sobolev_index", "s must lie in (0, 1]");
  CompensatedSum acc;
  for (const auto& e : f.entries()) {
    acc += std::pow(1.0 + static_cast<double>(e.point.norm2()), s) * std::norm(e.amplitude);
  }
  return kTwoPi * std::sqrt(acc.value());
}

std::vector<Complex> plane_wave(FreqPoint xi, Complex amplitude, int sign, double t, std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  const double omega = static_cast<double>(xi.norm2()) + static_cast<double>(sign) * std::norm(amplitude);
  std::vector<Complex> out(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::int64_t r = (xi.x() * static_cast<std::int64_t>(a) + xi.y() * static_cast<std::int64_t>(b)) % nn;
      if (r < 0) r += nn;
      const double phase = kTwoPi * static_cast<double>(r) / static_cast<double>(n) - omega * t;
      out[a * n + b] = amplitude * unit_phase(phase);
    }
  }
  return out;
}

double plane_wave_error(const PlaneWaveCheck& check, int sign, std::int64_t cutoff) {
  if (!(check.dt > 0.0) || !(check.horizon > 0.0)) {
    throw ValidationError("invalid_step", "plane-wave check needs positive dt and horizon");
  }
  const WeightedSpectrum f({{check.xi, Complex{check.amplitude, 0.0}}});
  NLSField field(f, cutoff, sign);
  const auto steps = static_cast<std::size_t>(std::llround(check.horizon / check.dt));
  field.advance(check.dt, steps);
  const auto exact = plane_wave(check.xi, Complex{check.amplitude, 0.0}, sign, field.time(), field.grid());
  double err = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) err = std::max(err, std::abs(field.samples()[i] - exact[i]));
  return err;
}

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("invalid_config", std::string("config field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown_config_key", "unknown key '" + key + "' in " + where);
  }
}

}  // namespace

WindowConfig window_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed_config", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("malformed_config", "config must be a JSON object");
  reject_unknown(j, {"N0", "s", "delta", "sign", "dt", "windows", "K_probe", "seed", "grid", "decay", "plane_wave"},
                 "config");
  WindowConfig c;
  c.n0 = get_or<std::int64_t>(j, "N0", c.n0);
  c.s = get_or<double>(j, "s", c.s);
  c.delta = get_or<double>(j, "delta", c.delta);
  c.sign = get_or<int>(j, "sign", c.sign);
  c.dt = get_or<double>(j, "dt", c.dt);
  c.windows = get_or<int>(j, "windows", c.windows);
  c.k_probe = get_or<std::int64_t>(j, "K_probe", c.k_probe);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.grid = get_or<std::size_t>(j, "grid", c.grid);
  c.decay = get_or<double>(j, "decay", c.decay);
  if (j.contains("plane_wave")) {
    const json& p = j.at("plane_wave");
    if (!p.is_object()) throw ValidationError("invalid_config", "plane_wave must be an object");
    reject_unknown(p, {"kx", "ky", "amplitude", "T", "dt"}, "plane_wave");
    PlaneWaveCheck pw;
    pw.xi = FreqPoint{get_or<std::int64_t>(p, "kx", 1), get_or<std::int64_t>(p, "ky", 0)};
    pw.amplitude = get_or<double>(p, "amplitude", pw.amplitude);
    pw.horizon = get_or<double>(p, "T", pw.horizon);
    pw.dt = get_or<double>(p, "dt", pw.dt);
    if (!(pw.dt > 0.0) || !(pw.horizon > 0.0)) throw ValidationError("invalid_config", "plane_wave T and dt must be positive");
    c.plane_wave = pw;
  }
  if (!is_dyadic(c.n0)) throw ValidationError("invalid_config", "N0 must be a power of two");
  if (!(c.s > 0.0 && c.s <= 1.0)) throw ValidationError("invalid_config", "s must lie in (0, 1]");
  if (!(c.delta >= 0.0) || !std::isfinite(c.delta)) throw ValidationError("invalid_config", "delta must be >= 0");
  if (c.sign != 1 && c.sign != -1) throw ValidationError("invalid_config", "sign must be +1 or -1");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("invalid_config", "dt must be positive");
  if (c.windows < 0 || c.windows > 60) throw ValidationError("invalid_config", "windows must lie in [0, 60]");
  if (c.k_probe < 2 || !is_dyadic(c.k_probe)) throw ValidationError("invalid_config", "K_probe must be a power of two >= 2");
  if (!(c.decay >= 0.0)) throw ValidationError("invalid_config", "decay must be >= 0");
  return c;
}

std::string window_config_to_json(const WindowConfig& c) {
  json j{{"N0", c.n0}, {"s", c.s},       {"delta", c.delta},     {"sign", c.sign}, {"dt", c.dt},
         {"windows", c.windows}, {"K_probe", c.k_probe}, {"seed", c.seed}, {"grid", c.grid}, {"decay", c.decay}};
  if (c.plane_wave) {
    j["plane_wave"] = {{"kx", c.plane_wave->xi.x()},
                       {"ky", c.plane_wave->xi.y()},
                       {"amplitude", c.plane_wave->amplitude},
                       {"T", c.plane_wave->horizon},
                       {"dt", c.plane_wave->dt}};
  }
  return j.dump(2);
}

WeightedSpectrum window_initial_data(const WindowConfig& config) {
  if (config.delta == 0.0) return {};
  Rng rng(config.seed);
  const auto f = random_smooth_spectrum(rng, config.n0, config.decay);
  return f.scaled(config.delta / (kTwoPi * f.l2_norm()));
}

WindowReport window_growth_experiment(const WindowConfig& config) {
  return window_growth_experiment(window_initial_data(config), config);
}

WindowReport window_growth_experiment(const WeightedSpectrum& u0, const WindowConfig& config) {
  NLSField field(u0, config.n0, config.sign, config.grid);
  WindowReport rep;
  const double m0 = field.mass();
  const double h0 = field.hamiltonian();
  double hs = field.sobolev_norm(config.s);
  const double hs0 = hs;
  rep.rows.push_back({field.time(), m0, h0, hs, 0, 1.0});
  CompensatedSum elapsed;
  for (int k = 0; k < config.windows; ++k) {
    const double nk = std::pow(static_cast<double>(config.k_probe), k) * static_cast<double>(config.n0);
    const double tau = 1.0 / (2.0 * log_floor1(nk));
    const auto steps = static_cast<std::size_t>(std::ceil(tau / config.dt - 1e-9));
    field.advance(tau / static_cast<double>(steps), steps);
    elapsed += tau;
    rep.window_lengths.push_back(tau);
    const double hs_new = field.sobolev_norm(config.s);
    const double growth = hs > 0.0 ? hs_new / hs : 1.0;
    hs = hs_new;
    rep.k_obs = std::max(rep.k_obs, growth);
    const double m = field.mass();
    const double h = field.hamiltonian();
    rep.rows.push_back({elapsed.value(), m, h, hs, k + 1, growth});
    if (m0 > 0.0) rep.mass_drift = std::max(rep.mass_drift, std::fabs(m - m0) / m0);
    const double hscale = std::fabs(h0) > 0.0 ? std::fabs(h0) : 1.0;
    rep.hamiltonian_drift = std::max(rep.hamiltonian_drift, std::fabs(h - h0) / hscale);
    if (hs0 > 0.0 && hs > 1e6 * hs0) rep.flagged = true;
  }
  rep.cumulative_time = elapsed.value();
  if (config.plane_wave) {
    const std::int64_t m = std::max<std::int64_t>(1, config.plane_wave->xi.max_abs());
    rep.plane_wave_error = plane_wave_error(*config.plane_wave, config.sign, std::bit_ceil(static_cast<std::uint64_t>(m)));
  }
  return rep;
}

void write_trajectory_csv(std::ostream& out, const WindowReport& report) {
  out << "t,mass,hamiltonian,hs_norm,window_index,growth_factor\n";
  for (const auto& r : report.rows) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.hamiltonian) << ','
        << format_double(r.hs_norm) << ',' << r.window_index << ',' << format_double(r.growth_factor) << '\n';
  }
}

std::string window_summary_json(const WindowConfig& config, const WindowReport& report) {
  json j;
  j["config"] = json::parse(window_config_to_json(config));
  j["K_obs"] = report.k_obs;
  j["cumulative_time"] = report.cumulative_time;
  j["windows"] = config.windows;
  j["mass_drift"] = report.mass_drift;
  j["hamiltonian_drift"] = report.hamiltonian_drift;
  j["flagged"] = report.flagged;
  j["window_lengths"] = report.window_lengths;
  if (report.plane_wave_error) j["plane_wave_error"] = *report.plane_wave_error;
  return j.dump(2) + "\n";
}

}  // namespace torus
