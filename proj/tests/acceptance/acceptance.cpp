// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: torus_stri_acceptance [--out-dir DIR] [--threads N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torus_stri/defaults.hpp"
#include "torus_stri/format.hpp"
#include "torus_stri/incidence.hpp"
#include "torus_stri/nls.hpp"
#include "torus_stri/parallel.hpp"
#include "torus_stri/propagator.hpp"
#include "torus_stri/quadruple.hpp"
#include "torus_stri/random.hpp"

namespace {

using namespace torus;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::string csv;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) { return format_double(v); }

std::string short_fmt(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(4);
  s << v;
  return s.str();
}

Outcome oracle_equivalence() {
  Stopwatch sw;
  Rng rng(0xacce55001);
  std::ostringstream csv;
  csv << "index,support,T,exact,quadrature,rel\n";
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto count = static_cast<std::size_t>(rng.uniform_int(1, 289));
    const auto f = random_nonnegative_spectrum(rng, 8, count);
    const auto hist = sigma_histogram(f);
    for (double t : {0.1, 1.0, kTwoPi}) {
      const double exact = l4_time_integral(hist, t);
      const double quad = l4_quadrature(f, t).value;
      const double rel = std::abs(exact - quad) / exact;
      worst = std::max(worst, rel);
      csv << i << ',' << f.size() << ',' << fmt(t) << ',' << fmt(exact) << ',' << fmt(quad) << ',' << fmt(rel)
          << '\n';
    }
  }
  const double s = sw.seconds();
  return {worst <= 1e-9 && s <= 60.0, "max_rel=" + short_fmt(worst) + " seconds=" + short_fmt(s), csv.str()};
}

Outcome enumeration_totals() {
  Rng rng(0xacce55002);
  std::ostringstream csv;
  csv << "set,size,additive_energy,enumerated\n";
  bool ok = true;
  auto check = [&](const std::string& name, const std::vector<FreqPoint>& s, std::optional<Int128> pinned) {
    const Int128 e = additive_energy(s);
    Int128 n = 0;
    enumerate_parallelograms(s, [&](const Parallelogram&) { ++n; });
    ok = ok && e == n && (!pinned || e == *pinned);
    csv << name << ',' << s.size() << ',' << format_int128(e) << ',' << format_int128(n) << '\n';
  };
  check("square", {{0, 0}, {1, 0}, {0, 1}, {1, 1}}, Int128{36});
  check("collinear", {{-1, 0}, {0, 0}, {1, 0}}, Int128{19});
  for (int i = 0; i < 100; ++i) {
    const std::int64_t radius = rng.uniform_int(1, 15);
    const std::int64_t side = 2 * radius + 1;
    const auto count = static_cast<std::size_t>(rng.uniform_int(1, std::min<std::int64_t>(200, side * side)));
    check("random" + std::to_string(i), random_point_set(rng, radius, count), std::nullopt);
  }
  return {ok, ok ? "102 sets equal" : "mismatch", csv.str()};
}

Outcome sharp_scaling() {
  Stopwatch sw;
  const std::vector<std::int64_t> ns{4, 8, 16, 32, 64};
  const auto rows = extremizer_scan(ns);
  double lo = 1e300, hi = 0.0;
  bool backends = true;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio4_over_log_n);
    hi = std::max(hi, r.ratio4_over_log_n);
    // The sigma = 0 bin of the separable box histogram must equal the walked count.
    const Box box = Box::centered(r.n);
    backends = backends && box_sigma_histogram(box).tau_view().front().count == box_rectangle_count(box);
  }
  std::ostringstream csv;
  write_scan_csv(csv, rows);
  const double s = sw.seconds();
  return {hi / lo <= 4.0 && s <= 600.0 && backends,
          "max/min=" + short_fmt(hi / lo) + " backends_agree=" + (backends ? "yes" : "no") +
              " seconds=" + short_fmt(s),
          csv.str()};
}

Outcome local_uniformity() {
  Stopwatch sw;
  const std::vector<std::int64_t> ns{8, 16, 32, 64};
  const auto rows = local_scan(ns, StrichartzMethod::kQuadrature);
  double lo = 1e300, hi = 0.0;
  std::string ratios;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    ratios += (ratios.empty() ? "" : "/") + short_fmt(r.ratio);
  }
  std::ostringstream csv;
  write_scan_csv(csv, rows);
  const double s = sw.seconds();
  return {hi / lo <= 1.5 && s <= 600.0,
          "R=" + ratios + " max/min=" + short_fmt(hi / lo) + " seconds=" + short_fmt(s), csv.str()};
}

Outcome szemeredi_trotter() {
  Stopwatch sw;
  Rng rng(0xacce55005);
  std::vector<std::pair<std::string, std::vector<FreqPoint>>> sets;
  for (std::int64_t n = 1; n <= 16; ++n) sets.emplace_back("grid" + std::to_string(n), Box::centered(n).points());
  for (int i = 0; i < 50; ++i) {
    const std::int64_t radius = rng.uniform_int(2, 40);
    const std::int64_t side = 2 * radius + 1;
    const auto count = static_cast<std::size_t>(rng.uniform_int(2, std::min<std::int64_t>(1089, side * side)));
    sets.emplace_back("random" + std::to_string(i), random_point_set(rng, radius, count));
  }
  std::ostringstream csv;
  csv << "set,n,max_ratio,argmax_k\n";
  bool bound = true, oracle = true;
  double worst = 0.0;
  for (const auto& [name, pts] : sets) {
    const auto profile = rich_line_profile(pts);
    // Brute-force line sizes from pair grouping.
    std::vector<std::size_t> at_least(pts.size() + 2, 0);
    for (const auto& line : testing::pair_grouping_lines(pts)) ++at_least[line.size()];
    for (std::size_t k = pts.size(); k-- > 2;) at_least[k] += at_least[k + 1];
    double best = 0.0;
    std::size_t best_k = 2;
    for (const auto& r : profile) {
      oracle = oracle && r.m == at_least[r.k];
      const double n = static_cast<double>(r.n), k = static_cast<double>(r.k);
      const double limit = 8.0 * (n * n / (k * k * k) + n / k);
      bound = bound && static_cast<double>(r.m) <= limit;
      if (r.ratio > best) {
        best = r.ratio;
        best_k = r.k;
      }
    }
    worst = std::max(worst, best);
    csv << name << ',' << pts.size() << ',' << fmt(best) << ',' << best_k << '\n';
  }
  const double s = sw.seconds();
  return {bound && oracle && s <= 300.0,
          "max_ratio=" + short_fmt(worst) + " oracle_agrees=" + (oracle ? "yes" : "no") + " seconds=" + short_fmt(s),
          csv.str()};
}

Outcome decomposition_halving() {
  const auto suite = calibration_suite();
  std::ostringstream csv;
  csv << "input,size,steps,all_halved,converged,reconstruction_error,max_rich_lines_through_point\n";
  bool ok = true;
  double worst_err = 0.0;
  std::size_t worst_rich = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& f = suite[i];
    const auto trace = decompose(f, kDefaultRichnessC);
    const auto back = trace.reconstruct();
    double err = back.size() == f.size() ? 0.0 : 1e300;
    double scale = 0.0;
    for (const auto& e : f.entries()) {
      err = std::max(err, std::abs(back.at(e.point) - e.amplitude));
      scale = std::max(scale, std::abs(e.amplitude));
    }
    err /= scale;
    std::size_t rich = 0;
    for (const auto& step : trace.steps) rich = std::max(rich, max_rich_lines_through_point(step.levels));
    ok = ok && trace.all_halved && trace.converged && err <= 1e-12 && rich <= 1;
    worst_err = std::max(worst_err, err);
    worst_rich = std::max(worst_rich, rich);
    csv << i << ',' << f.size() << ',' << trace.steps.size() << ',' << (trace.all_halved ? "true" : "false") << ','
        << (trace.converged ? "true" : "false") << ',' << fmt(err) << ',' << rich << '\n';
  }
  return {ok,
          "C=" + std::to_string(kDefaultRichnessC) + " inputs=" + std::to_string(suite.size()) +
              " max_reconstruction_error=" + short_fmt(worst_err) +
              " max_rich_lines_through_point=" + std::to_string(worst_rich),
          csv.str()};
}

Outcome counting_trend() {
  const std::vector<std::size_t> sizes{125, 250, 500, 1000, 2000};
  constexpr int kSeeds = 3;
  std::ostringstream csv;
  csv << "size,seed,union,bins,max_ratio_a2_a4,max_ratio_a2_a3,max_ratio_gcd,max_ratio_j1_j2_a3\n";
  std::vector<double> bound_a2_a4, bound_j1_j2_a3;
  for (std::size_t size : sizes) {
    double worst_a2_a4 = 0.0, worst_j1_j2_a3 = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      Rng rng(0xacce55007 + 1000 * size + static_cast<std::uint64_t>(seed));
      // Fill density about one half.
      const auto radius = static_cast<std::int64_t>(std::ceil((std::sqrt(2.0 * static_cast<double>(size)) - 1) / 2));
      const auto f = random_nonnegative_spectrum(rng, radius, size);
      const auto levels = decompose(f, kDefaultRichnessC).steps.front().levels;
      const auto bins = rectangle_bins(levels);
      const auto sum = summarize_bins(bins);
      worst_a2_a4 = std::max(worst_a2_a4, sum.max_ratio_a2_a4);
      worst_j1_j2_a3 = std::max(worst_j1_j2_a3, sum.max_ratio_j1_j2_a3);
      csv << size << ',' << seed << ',' << levels.total_points() << ',' << bins.size() << ','
          << fmt(sum.max_ratio_a2_a4) << ',' << fmt(sum.max_ratio_a2_a3) << ',' << fmt(sum.max_ratio_gcd) << ','
          << fmt(sum.max_ratio_j1_j2_a3) << '\n';
    }
    bound_a2_a4.push_back(worst_a2_a4);
    bound_j1_j2_a3.push_back(worst_j1_j2_a3);
  }
  const double t5 = bound_a2_a4.back() / bound_a2_a4.front();
  const double t6 = bound_j1_j2_a3.back() / bound_j1_j2_a3.front();
  const bool ok = std::isfinite(t5) && std::isfinite(t6) && t5 <= 2.0 && t6 <= 2.0;
  return {ok,
          "trend_a2_a4=" + short_fmt(t5) + " trend_j1_j2_a3=" + short_fmt(t6) + " (largest/smallest of " +
              std::to_string(sizes.front()) + ".." + std::to_string(sizes.back()) + ")",
          csv.str()};
}

WeightedSpectrum smooth(std::uint64_t seed, std::int64_t band, double l2) {
  Rng rng(seed);
  const auto f = random_smooth_spectrum(rng, band, 1.5);
  return f.scaled(l2 / (kTwoPi * f.l2_norm()));
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Outcome nls_solver() {
  std::ostringstream csv;
  csv << "metric,value\n";
  const double pw = std::max(plane_wave_error(PlaneWaveCheck{}, 1, 2), plane_wave_error(PlaneWaveCheck{}, -1, 2));

  const auto u0 = smooth(0xacce55008, 4, kTwoPi * 2.0);
  auto run = [&](double dt) {
    NLSField a(u0, 4, 1);
    a.advance(dt, static_cast<std::size_t>(std::llround(1.0 / dt)));
    return a.samples();
  };
  const auto u1 = run(0.02), u2 = run(0.01), u4 = run(0.005);
  const double order = std::log2(max_diff(u1, u2) / max_diff(u2, u4));

  NLSField small(smooth(0xacce55009, 16, 0.05), 16, 1);
  const double m0 = small.mass(), h0 = small.hamiltonian();
  small.advance(1e-3, 10000);
  const double mass_drift = std::abs(small.mass() - m0) / m0;
  const double ham_drift = std::abs(small.hamiltonian() - h0) / std::abs(h0);

  WindowConfig c10;
  c10.windows = 10;
  WindowConfig c20;
  c20.windows = 20;
  const auto r10 = window_growth_experiment(c10);
  const auto r20 = window_growth_experiment(c20);
  const double stability = r20.k_obs / r10.k_obs;

  csv << "plane_wave_error," << fmt(pw) << '\n'
      << "splitting_order," << fmt(order) << '\n'
      << "mass_drift_1e4_steps," << fmt(mass_drift) << '\n'
      << "hamiltonian_drift_T10," << fmt(ham_drift) << '\n'
      << "K_obs_10," << fmt(r10.k_obs) << '\n'
      << "K_obs_20," << fmt(r20.k_obs) << '\n'
      << "window_mass_drift_20," << fmt(r20.mass_drift) << '\n';
  write_trajectory_csv(csv, r20);

  const bool ok = pw <= 1e-6 && std::abs(order - 2.0) <= 0.1 && mass_drift <= 1e-12 && ham_drift <= 1e-6 &&
                  std::isfinite(r20.k_obs) && !r20.flagged && stability <= 2.0 && stability >= 0.5;
  return {ok,
          "plane_wave=" + short_fmt(pw) + " order=" + short_fmt(order) + " mass=" + short_fmt(mass_drift) +
              " hamiltonian=" + short_fmt(ham_drift) + " K10=" + short_fmt(r10.k_obs) + " K20=" + short_fmt(r20.k_obs),
          csv.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir;
  std::size_t other_threads = 4;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out-dir") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      other_threads = static_cast<std::size_t>(std::max(2, std::atoi(argv[++i])));
    } else {
      std::cerr << "usage: " << argv[0] << " [--out-dir DIR] [--threads N]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "oracle-equivalence", oracle_equivalence},   {2, "enumeration-totals", enumeration_totals},
      {3, "sharp-example-scaling", sharp_scaling},     {4, "local-uniformity", local_uniformity},
      {5, "szemeredi-trotter", szemeredi_trotter},     {6, "decomposition-halving", decomposition_halving},
      {7, "counting-bound-trend", counting_trend},     {8, "nls-solver", nls_solver},
  };

  bool all = true;
  std::vector<std::string> first;
  {
    ThreadCountGuard guard(1);
    for (const auto& c : criteria) {
      Outcome o;
      try {
        o = c.run();
      } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what(), ""};
      }
      std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail
                << std::endl;
      all = all && o.pass;
      first.push_back(o.csv);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / ("criterion" + std::to_string(c.id) + ".csv")) << o.csv;
      }
    }
  }

  std::vector<int> differ;
  {
    ThreadCountGuard guard(other_threads);
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      std::string csv;
      try {
        csv = criteria[i].run().csv;
      } catch (const std::exception&) {
        csv = "<exception>";
      }
      // Timing columns are not part of the CSVs, so the bytes must match exactly.
      if (csv != first[i] || csv.empty()) differ.push_back(criteria[i].id);
    }
  }
  std::string which;
  for (int id : differ) which += (which.empty() ? "" : ",") + std::to_string(id);
  const bool det = differ.empty();
  std::cout << (det ? "PASS" : "FAIL") << " criterion 9 determinism: threads 1 vs " << other_threads << ", "
            << (det ? "all 8 CSVs byte-identical" : "differing criteria " + which) << std::endl;
  all = all && det;
  return all ? 0 : 1;
}
