#include "torus_stri/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "torus_stri/format.hpp"
#include "torus_stri/summation.hpp"

namespace torus {

std::string to_string(FreqPoint p) {
  return "(" + std::to_string(p.x()) + "," + std::to_string(p.y()) + ")";
}

namespace {

bool point_less(const SpectrumEntry& a, const SpectrumEntry& b) { return a.point < b.point; }

// floor(a / b) for b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace

WeightedSpectrum::WeightedSpectrum(std::vector<SpectrumEntry> entries) {
  std::erase_if(entries, [](const SpectrumEntry& e) { return e.amplitude == Complex{}; });
  std::sort(entries.begin(), entries.end(), point_less);
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].point == entries[i - 1].point) {
      throw ValidationError("duplicate_frequency",
                            "duplicate frequency " + to_string(entries[i].point));
    }
  }
  entries_ = std::move(entries);
}

WeightedSpectrum WeightedSpectrum::indicator(std::span<const FreqPoint> points, double value) {
  std::vector<SpectrumEntry> e;
  e.reserve(points.size());
  for (const auto& p : points) e.push_back({p, Complex{value, 0.0}});
  return WeightedSpectrum(std::move(e));
}

std::vector<FreqPoint> WeightedSpectrum::support() const {
  std::vector<FreqPoint> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.point);
  return out;
}

Complex WeightedSpectrum::at(FreqPoint p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), SpectrumEntry{p, {}}, point_less);
  if (it != entries_.end() && it->point == p) return it->amplitude;
  return {};
}

bool WeightedSpectrum::contains(FreqPoint p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), SpectrumEntry{p, {}}, point_less);
  return it != entries_.end() && it->point == p;
}

double WeightedSpectrum::l2_norm_squared() const {
  CompensatedSum s;
  for (const auto& e : entries_) s += std::norm(e.amplitude);
  return s.value();
}

double WeightedSpectrum::l2_norm() const { return std::sqrt(l2_norm_squared()); }

bool WeightedSpectrum::is_nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const SpectrumEntry& e) {
    return e.amplitude.imag() == 0.0 && e.amplitude.real() >= 0.0;
  });
}

std::int64_t WeightedSpectrum::max_abs_component() const {
  std::int64_t m = 0;
  for (const auto& e : entries_) m = std::max(m, e.point.max_abs());
  return m;
}

std::int64_t WeightedSpectrum::max_norm2() const {
  std::int64_t m = 0;
  for (const auto& e : entries_) m = std::max(m, e.point.norm2());
  return m;
}

WeightedSpectrum WeightedSpectrum::scaled(Complex factor) const {
  std::vector<SpectrumEntry> e(entries_.begin(), entries_.end());
  for (auto& x : e) x.amplitude *= factor;
  return WeightedSpectrum(std::move(e));
}

WeightedSpectrum WeightedSpectrum::translated(FreqPoint shift) const {
  std::vector<SpectrumEntry> e(entries_.begin(), entries_.end());
  for (auto& x : e) x.point = x.point + shift;
  return WeightedSpectrum(std::move(e));
}

bool operator==(const WeightedSpectrum& a, const WeightedSpectrum& b) {
  return std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
                    [](const SpectrumEntry& x, const SpectrumEntry& y) {
                      return x.point == y.point && x.amplitude == y.amplitude;
                    });
}

std::vector<FreqPoint> Box::points() const {
  std::vector<FreqPoint> out;
  if (x_hi < x_lo || y_hi < y_lo) return out;
  out.reserve(static_cast<std::size_t>(width() * height()));
  for (std::int64_t x = x_lo; x <= x_hi; ++x)
    for (std::int64_t y = y_lo; y <= y_hi; ++y) out.emplace_back(x, y);
  return out;
}

bool is_dyadic(std::int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

Cube::Cube(std::int64_t n, FreqPoint a) : size(n), anchor(a) {
  if (!is_dyadic(n)) {
    throw ValidationError("cube_size_not_dyadic", "cube size must be a power of two");
  }
}

Cube Cube::containing(FreqPoint p, std::int64_t n) {
  if (!is_dyadic(n)) {
    throw ValidationError("cube_size_not_dyadic", "cube size must be a power of two");
  }
  return Cube(n, FreqPoint{floor_div(p.x() - 1, n), floor_div(p.y() - 1, n)});
}

bool Cube::contains(FreqPoint p) const {
  const std::int64_t x0 = size * anchor.x();
  const std::int64_t y0 = size * anchor.y();
  return p.x() > x0 && p.x() <= x0 + size && p.y() > y0 && p.y() <= y0 + size;
}

Box Cube::as_box() const {
  const std::int64_t x0 = size * anchor.x();
  const std::int64_t y0 = size * anchor.y();
  return {x0 + 1, x0 + size, y0 + 1, y0 + size};
}

PointSet::PointSet(std::vector<FreqPoint> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

bool PointSet::contains(FreqPoint p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

bool region_contains(const Region& region, FreqPoint p) {
  return std::visit([p](const auto& r) { return r.contains(p); }, region);
}

namespace {

WeightedSpectrum filter(const WeightedSpectrum& f, const Region& region, bool keep_inside) {
  std::vector<SpectrumEntry> out;
  for (const auto& e : f.entries()) {
    if (region_contains(region, e.point) == keep_inside) out.push_back(e);
  }
  return WeightedSpectrum(std::move(out));
}

}  // namespace

WeightedSpectrum project(const WeightedSpectrum& f, const Region& region) {
  return filter(f, region, true);
}

WeightedSpectrum project_complement(const WeightedSpectrum& f, const Region& region) {
  return filter(f, region, false);
}

WeightedSpectrum parse_spectrum(std::istream& in, const std::string& source) {
  std::vector<SpectrumEntry> entries;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw ValidationError("malformed_spectrum",
                            source + ":" + std::to_string(line_no) + ": " + why);
    };
    if (tok.size() < 3 || tok.size() > 4) fail("expected 'x y re [im]'");
    std::int64_t x = 0;
    std::int64_t y = 0;
    double re = 0.0;
    double im = 0.0;
    try {
      std::size_t used = 0;
      x = std::stoll(tok[0], &used);
      if (used != tok[0].size()) fail("bad integer '" + tok[0] + "'");
      y = std::stoll(tok[1], &used);
      if (used != tok[1].size()) fail("bad integer '" + tok[1] + "'");
      re = std::stod(tok[2], &used);
      if (used != tok[2].size()) fail("bad number '" + tok[2] + "'");
      if (tok.size() == 4) {
        im = std::stod(tok[3], &used);
        if (used != tok[3].size()) fail("bad number '" + tok[3] + "'");
      }
    } catch (const std::logic_error&) {
      fail("unparsable entry");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) fail("non-finite amplitude");
    FreqPoint p;
    try {
      p = FreqPoint{x, y};
    } catch (const ValidationError&) {
      fail("frequency component exceeds 2^30");
    }
    entries.push_back({p, Complex{re, im}});
    line_of.push_back(line_no);
  }
  // Report duplicates with the line of the second occurrence.
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].point < entries[b].point;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (entries[order[k]].point == entries[order[k - 1]].point) {
      throw ValidationError("duplicate_frequency",
                            source + ":" + std::to_string(line_of[order[k]]) +
                                ": duplicate frequency " + to_string(entries[order[k]].point));
    }
  }
  return WeightedSpectrum(std::move(entries));
}

WeightedSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("unreadable_file", "cannot open " + path);
  return parse_spectrum(in, path);
}

void write_spectrum(std::ostream& out, const WeightedSpectrum& f) {
  for (const auto& e : f.entries()) {
    out << e.point.x() << ' ' << e.point.y() << ' ' << format_double(e.amplitude.real()) << ' '
        << format_double(e.amplitude.imag()) << '\n';
  }
}

std::string spectrum_to_json(const WeightedSpectrum& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : f.entries()) {
    arr.push_back({{"x", e.point.x()},
                   {"y", e.point.y()},
                   {"re", e.amplitude.real()},
                   {"im", e.amplitude.imag()}});
  }
  return arr.dump();
}

WeightedSpectrum spectrum_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed_json", e.what());
  }
  if (!arr.is_array()) throw ValidationError("malformed_json", "expected a JSON array");
  std::vector<SpectrumEntry> entries;
  for (const auto& item : arr) {
    try {
      entries.push_back({FreqPoint{item.at("x").get<std::int64_t>(), item.at("y").get<std::int64_t>()},
                         Complex{item.at("re").get<double>(), item.value("im", 0.0)}});
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed_json", e.what());
    }
  }
  return WeightedSpectrum(std::move(entries));
}

}  // namespace torus
