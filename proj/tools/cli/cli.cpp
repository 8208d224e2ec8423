#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "torus_stri/defaults.hpp"
#include "torus_stri/errors.hpp"
#include "torus_stri/format.hpp"
#include "torus_stri/incidence.hpp"
#include "torus_stri/levels.hpp"
#include "torus_stri/nls.hpp"
#include "torus_stri/parallel.hpp"
#include "torus_stri/propagator.hpp"
#include "torus_stri/quadruple.hpp"
#include "torus_stri/random.hpp"

namespace torus::cli {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::int64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("invalid_argument", what + ": expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (text.empty() || !in || in.peek() != std::char_traits<char>::eof() || !std::isfinite(v)) {
    throw ValidationError("invalid_argument", what + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

// Writes through `emit` to the file at path, or to out when path is empty or "-".
void emit_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("unwritable_file", "cannot write " + path);
  emit(file);
  if (!file) throw ValidationError("unwritable_file", "write failed: " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("unwritable_file", "cannot create directory " + dir + ": " + ec.message());
}

Backend parse_backend(const std::string& name) {
  if (name == "generic") return Backend::kGeneric;
  if (name == "grid-fast") return Backend::kGridFast;
  throw ValidationError("invalid_backend", "unknown backend '" + name + "'");
}

double parse_horizon(const std::string& text, std::size_t support) {
  if (text == "full") return kTwoPi;
  if (text == "local") return local_horizon(support);
  const double t = parse_real(text, "--T");
  if (!(t > 0.0)) throw ValidationError("invalid_horizon", "--T must be positive");
  return t;
}

int check_richness(int c) {
  if (c < 0) throw ValidationError("invalid_richness", "--C must be nonnegative");
  return c;
}

std::vector<FreqPoint> support_or_throw(const WeightedSpectrum& f) {
  if (f.empty()) throw ValidationError("empty_spectrum", "empty spectrum");
  return f.support();
}

struct Options {
  std::size_t threads = 0;
  bool verbose = false;

  std::string enum_file;
  bool enum_tau = false;
  bool enum_dyadic = false;
  std::string enum_backend = "generic";
  std::size_t enum_cap = kDefaultGenericCap;
  std::string enum_out;

  std::string stri_set;
  std::string stri_t = "local";
  std::string stri_method = "auto";
  std::string stri_out;

  std::vector<std::int64_t> scan_n{4, 8, 16, 32, 64};
  bool scan_local = false;
  std::string scan_method = "auto";
  bool scan_timing = false;
  std::string scan_out;

  std::string inc_set;
  std::size_t inc_k = 0;
  bool inc_decompose = false;
  int inc_c = kDefaultRichnessC;
  std::string inc_out_dir;

  std::string dec_set;
  int dec_c = kDefaultRichnessC;
  std::string dec_out;

  std::string bins_set;
  int bins_c = kDefaultRichnessC;
  std::size_t bins_cap = kRectangleBinCap;
  std::string bins_out;

  std::string nls_config;
  std::string nls_out_dir = ".";
};

int cmd_enumerate(const Options& o, std::ostream& out) {
  const WeightedSpectrum f = load_spectrum(o.enum_file);
  if (f.empty()) throw ValidationError("empty_spectrum", "empty spectrum");
  EnumerationOptions eo;
  eo.backend = parse_backend(o.enum_backend);
  eo.cap = o.enum_cap;
  const SigmaHistogram hist = sigma_histogram(f, eo);
  emit_to(o.enum_out, out, [&](std::ostream& s) {
    if (o.enum_dyadic) {
      write_dyadic_csv(s, hist);
    } else {
      write_tau_csv(s, hist);
    }
  });
  return 0;
}

int cmd_strichartz(const Options& o, std::ostream& out) {
  const WeightedSpectrum f = resolve_set(o.stri_set);
  if (f.empty()) throw ValidationError("empty_spectrum", "empty spectrum");
  const double horizon = parse_horizon(o.stri_t, f.size());
  const StrichartzReport r = strichartz_ratio(f, horizon, parse_strichartz_method(o.stri_method), o.stri_set);
  emit_to(o.stri_out, out, [&](std::ostream& s) {
    s << "set,support,T,l4,l2,ratio,method,error_estimate\n";
    s << r.set << ',' << r.support << ',' << format_double(r.horizon) << ',' << format_double(r.l4) << ','
      << format_double(r.l2) << ',' << format_double(r.ratio) << ',' << r.method << ','
      << format_double(r.error_estimate) << '\n';
  });
  return 0;
}

int cmd_extremizer_scan(const Options& o, std::ostream& out) {
  const std::vector<ScanRow> rows = o.scan_local
                                        ? local_scan(o.scan_n, parse_strichartz_method(o.scan_method), o.scan_timing)
                                        : extremizer_scan(o.scan_n, o.scan_timing);
  emit_to(o.scan_out, out, [&](std::ostream& s) { write_scan_csv(s, rows); });
  return 0;
}

int cmd_incidence(const Options& o, std::ostream& out) {
  const WeightedSpectrum f = resolve_set(o.inc_set);
  const std::vector<FreqPoint> points = support_or_throw(f);
  std::vector<RichLineReport> reports;
  if (o.inc_k > 0) {
    if (o.inc_k < 2) throw ValidationError("invalid_k", "--k must be at least 2");
    reports.push_back(rich_lines(points, o.inc_k));
  } else {
    reports = rich_line_profile(points);
  }
  std::optional<DecompositionTrace> trace;
  if (o.inc_decompose) trace = decompose(f, check_richness(o.inc_c));

  if (o.inc_out_dir.empty()) {
    write_rich_lines_csv(out, reports);
    if (trace) {
      out << '\n';
      write_decomposition_csv(out, *trace);
    }
    return 0;
  }
  ensure_dir(o.inc_out_dir);
  emit_to(join_path(o.inc_out_dir, "rich_lines.csv"), out,
          [&](std::ostream& s) { write_rich_lines_csv(s, reports); });
  if (trace) {
    emit_to(join_path(o.inc_out_dir, "decomposition.csv"), out,
            [&](std::ostream& s) { write_decomposition_csv(s, *trace); });
  }
  return 0;
}

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
  const WeightedSpectrum f = resolve_set(o.dec_set);
  support_or_throw(f);
  const DecompositionTrace trace = decompose(f, check_richness(o.dec_c));
  emit_to(o.dec_out, out, [&](std::ostream& s) { write_decomposition_csv(s, trace); });
  if (!trace.converged) err << "warning: decomposition did not exhaust the input\n";
  return 0;
}

int cmd_bins(const Options& o, std::ostream& out, std::ostream& err, bool verbose) {
  const WeightedSpectrum f = resolve_set(o.bins_set);
  support_or_throw(f);
  const DecompositionTrace trace = decompose(f, check_richness(o.bins_c));
  const std::vector<RectangleBin> bins = rectangle_bins(trace.steps.front().levels, o.bins_cap);
  emit_to(o.bins_out, out, [&](std::ostream& s) { write_bins_csv(s, bins); });
  if (verbose) {
    const BinBoundSummary sum = summarize_bins(bins);
    err << "max_ratio_a2_a4=" << format_double(sum.max_ratio_a2_a4) << '\n'
        << "max_ratio_a2_a3=" << format_double(sum.max_ratio_a2_a3) << '\n'
        << "max_ratio_gcd=" << format_double(sum.max_ratio_gcd) << '\n'
        << "max_ratio_j1_j2_a3=" << format_double(sum.max_ratio_j1_j2_a3) << '\n';
  }
  return 0;
}

int cmd_nls(const Options& o, std::ostream& out) {
  std::ifstream in(o.nls_config, std::ios::binary);
  if (!in) throw ValidationError("unreadable_file", "cannot open " + o.nls_config);
  std::stringstream buf;
  buf << in.rdbuf();
  const WindowConfig config = window_config_from_json(buf.str());
  const WindowReport report = window_growth_experiment(config);
  const std::string summary = window_summary_json(config, report);
  ensure_dir(o.nls_out_dir);
  emit_to(join_path(o.nls_out_dir, "trajectory.csv"), out,
          [&](std::ostream& s) { write_trajectory_csv(s, report); });
  emit_to(join_path(o.nls_out_dir, "summary.json"), out, [&](std::ostream& s) { s << summary; });
  out << summary;
  return 0;
}

struct SelfCheck {
  std::string name;
  std::function<bool(std::string&)> run;
};

std::vector<FreqPoint> pts(std::initializer_list<std::pair<std::int64_t, std::int64_t>> list) {
  std::vector<FreqPoint> v;
  for (auto [x, y] : list) v.emplace_back(x, y);
  return v;
}

int cmd_selftest(std::ostream& out) {
  const std::vector<SelfCheck> checks{
      {"square_total_36",
       [](std::string& detail) {
         const auto h = sigma_histogram(pts({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
         const auto tau = h.tau_view();
         detail = "total=" + format_int128(h.total_count());
         return h.total_count() == 36 && tau.size() == 1 && tau[0].tau == 0;
       }},
      {"collinear_total_19",
       [](std::string& detail) {
         const auto tau = sigma_histogram(pts({{0, 0}, {1, 0}, {2, 0}})).tau_view();
         detail = "bins=" + std::to_string(tau.size());
         return tau.size() == 2 && tau[0].tau == 0 && tau[0].count == 15 && tau[1].tau == 2 && tau[1].count == 4;
       }},
      {"grid_fast_matches_generic",
       [](std::string& detail) {
         const Box box = Box::centered(3);
         const auto a = sigma_histogram(box.points());
         const auto b = box_sigma_histogram(box);
         bool same = a.bins().size() == b.bins().size();
         for (std::size_t i = 0; same && i < a.bins().size(); ++i) {
           same = a.bins()[i].sigma == b.bins()[i].sigma && a.bins()[i].count == b.bins()[i].count;
         }
         detail = "bins=" + std::to_string(a.bins().size());
         return same;
       }},
      {"exact_matches_quadrature",
       [](std::string& detail) {
         Rng rng(7);
         const WeightedSpectrum f = random_nonnegative_spectrum(rng, 4, 20);
         const double exact = l4_time_integral(f, 1.0);
         const double quad = l4_quadrature(f, 1.0).value;
         const double rel = std::abs(exact - quad) / exact;
         detail = "rel=" + format_double(rel);
         return rel <= 1e-9;
       }},
      {"single_point_ratio",
       [](std::string& detail) {
         const auto r = strichartz_ratio(WeightedSpectrum::indicator(pts({{0, 0}})), kTwoPi);
         const double expect = std::pow(kTwoPi, -0.25);
         detail = "ratio=" + format_double(r.ratio);
         return std::abs(r.ratio - expect) <= 1e-12 * expect;
       }},
      {"rich_lines_3x3",
       [](std::string& detail) {
         const auto r = rich_lines(Box::centered(1).points(), 3);
         detail = "m=" + std::to_string(r.m);
         return r.m == 8;
       }},
      {"decomposition_halves_grid8",
       [](std::string& detail) {
         const auto trace = decompose(WeightedSpectrum::indicator(Box::centered(8).points()), kDefaultRichnessC);
         detail = "steps=" + std::to_string(trace.steps.size());
         return trace.all_halved && trace.converged;
       }},
      {"plane_wave_closed_form",
       [](std::string& detail) {
         const double e = plane_wave_error(PlaneWaveCheck{}, 1, 4);
         detail = "error=" + format_double(e);
         return e <= 1e-6;
       }},
  };
  bool all = true;
  for (const auto& c : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << ' ' << detail << '\n';
    all = all && ok;
  }
  return all ? 0 : static_cast<int>(ErrorKind::kNumerical);
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << "error_code=" << code << '\n' << "error: " << message << '\n';
}

}  // namespace

WeightedSpectrum resolve_set(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string kind = colon == std::string::npos ? "" : descriptor.substr(0, colon);
  const std::string rest = colon == std::string::npos ? descriptor : descriptor.substr(colon + 1);
  if (kind == "grid") {
    const std::int64_t n = parse_int(rest, "grid:N");
    if (n < 0 || n > 4096) throw ValidationError("invalid_set", "grid:N needs 0 <= N <= 4096");
    return WeightedSpectrum::indicator(Box::centered(n).points());
  }
  if (kind == "random") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw ValidationError("invalid_set", "expected random:COUNT:RADIUS:SEED");
    const std::int64_t count = parse_int(parts[0], "random count");
    const std::int64_t radius = parse_int(parts[1], "random radius");
    const std::int64_t seed = parse_int(parts[2], "random seed");
    if (radius < 0 || radius > 4096) throw ValidationError("invalid_set", "random radius out of range");
    const std::int64_t side = 2 * radius + 1;
    if (count < 1 || count > side * side) throw ValidationError("invalid_set", "random count out of range");
    Rng rng(static_cast<std::uint64_t>(seed));
    return random_nonnegative_spectrum(rng, radius, static_cast<std::size_t>(count));
  }
  if (kind == "file") return load_spectrum(rest);
  if (descriptor.empty()) throw ValidationError("invalid_set", "empty --set");
  return load_spectrum(descriptor);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact L4 Strichartz sums, incidence counting and cubic NLS windows on the 2-torus", "torus-stri"};
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "Worker cap (default: TORUS_STRI_THREADS or hardware)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_flag("-v,--verbose", o.verbose, "Timing and summaries on stderr");

  auto* enumerate = app.add_subcommand("enumerate", "Parallelogram histogram of a spectrum file");
  enumerate->add_option("spectrum-file", o.enum_file, "Lines of 'x y re [im]'")->required();
  auto* tau_flag = enumerate->add_flag("--tau-histogram", o.enum_tau, "Histogram by tau (default)");
  enumerate->add_flag("--dyadic", o.enum_dyadic, "Histogram by dyadic tau bins [M, 2M)")->excludes(tau_flag);
  enumerate->add_option("--backend", o.enum_backend, "generic | grid-fast");
  enumerate->add_option("--cap", o.enum_cap, "Largest support for the generic backend");
  enumerate->add_option("-o,--out", o.enum_out, "Output CSV (default stdout)");

  auto* strichartz = app.add_subcommand("strichartz", "L4/L2 ratio of the free evolution");
  strichartz->add_option("--set", o.stri_set, "grid:N | file:PATH | random:COUNT:RADIUS:SEED")->required();
  strichartz->add_option("--T", o.stri_t, "local (default, 1 / log #S) | full | positive number");
  strichartz->add_option("--method", o.stri_method, "auto | exact | quadrature");
  strichartz->add_option("-o,--out", o.stri_out, "Output CSV (default stdout)");

  auto* scan = app.add_subcommand("extremizer-scan", "R(N) for chi of [-N, N]^2");
  scan->add_option("--N", o.scan_n, "Comma separated N values")->delimiter(',');
  scan->add_flag("--local", o.scan_local, "Use T = 1 / log #S instead of T = 2 pi");
  scan->add_option("--method", o.scan_method, "Method for --local: auto | exact | quadrature");
  scan->add_flag("--timing", o.scan_timing, "Fill the seconds column");
  scan->add_option("-o,--out", o.scan_out, "Output CSV (default stdout)");

  auto* incidence = app.add_subcommand("incidence", "Rich lines and optional decomposition");
  incidence->add_option("--set", o.inc_set, "Point set descriptor")->required();
  incidence->add_option("--k", o.inc_k, "Richness threshold (default: all k in [2, n])");
  incidence->add_flag("--decompose", o.inc_decompose, "Also run the exceptional-set decomposition");
  incidence->add_option("--C", o.inc_c, "Richness constant");
  incidence->add_option("--out-dir", o.inc_out_dir, "Directory for rich_lines.csv and decomposition.csv");

  auto* decomp = app.add_subcommand("decompose", "Exceptional-set decomposition of a nonnegative spectrum");
  decomp->add_option("--set", o.dec_set, "Spectrum descriptor")->required();
  decomp->add_option("--C", o.dec_c, "Richness constant");
  decomp->add_option("-o,--out", o.dec_out, "Output CSV (default stdout)");

  auto* bins = app.add_subcommand("bins", "Rectangle counts per (j, a) bin of the first decomposition step");
  bins->add_option("--set", o.bins_set, "Spectrum descriptor")->required();
  bins->add_option("--C", o.bins_c, "Richness constant");
  bins->add_option("--cap", o.bins_cap, "Largest total level size");
  bins->add_option("-o,--out", o.bins_out, "Output CSV (default stdout)");

  auto* nls = app.add_subcommand("nls", "Logarithmic window experiment for cubic NLS");
  nls->add_option("config", o.nls_config, "JSON configuration")->required();
  nls->add_option("--out-dir", o.nls_out_dir, "Directory for trajectory.csv and summary.json");

  auto* selftest = app.add_subcommand("selftest", "Quick built-in checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return static_cast<int>(ErrorKind::kValidation);
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    std::optional<ThreadCountGuard> guard;
    if (o.threads > 0) guard.emplace(o.threads);
    if (enumerate->parsed()) {
      code = cmd_enumerate(o, out);
    } else if (strichartz->parsed()) {
      code = cmd_strichartz(o, out);
    } else if (scan->parsed()) {
      code = cmd_extremizer_scan(o, out);
    } else if (incidence->parsed()) {
      code = cmd_incidence(o, out);
    } else if (decomp->parsed()) {
      code = cmd_decompose(o, out, err);
    } else if (bins->parsed()) {
      code = cmd_bins(o, out, err, o.verbose);
    } else if (nls->parsed()) {
      code = cmd_nls(o, out);
    } else if (selftest->parsed()) {
      code = cmd_selftest(out);
    }
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return e.exit_code();
  } catch (const std::bad_alloc&) {
    report_error(err, "out_of_memory", "allocation failed");
    return static_cast<int>(ErrorKind::kCapExceeded);
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return static_cast<int>(ErrorKind::kNumerical);
  }
  if (o.verbose) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "elapsed_seconds=" << format_double(s) << '\n';
  }
  return code;
}

}  // namespace torus::cli
