#include "shadowgeo/shadow_curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "shadowgeo/interpolation.hpp"
#include "shadowgeo/io.hpp"

namespace shadowgeo {

bool SampledCurve::has_derivatives() const {
  return std::any_of(nodes.begin(), nodes.end(), [](const CurveNode& n) { return n.d1.has_value(); });
}

SampledCurve SampledCurve::from_points(const std::vector<Vec>& points) {
  std::vector<double> ell(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) ell[i] = ell[i - 1] + (points[i] - points[i - 1]).norm();
  return from_points(points, ell);
}

SampledCurve SampledCurve::from_points(const std::vector<Vec>& points, const std::vector<double>& ell) {
  if (points.size() != ell.size()) throw Error(ErrorKind::InvalidInput, "curve: point / arc-length count mismatch");
  SampledCurve curve;
  curve.nodes.reserve(points.size());
  const double total = ell.empty() ? 0.0 : ell.back();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) {
      if (points[i].size() != points[0].size()) throw Error(ErrorKind::InvalidInput, "curve: mixed dimensions");
      if (!(ell[i] > ell[i - 1])) throw Error(ErrorKind::InvalidInput, "curve: arc length must increase strictly");
    }
    CurveNode node;
    node.point = points[i];
    node.ell = ell[i];
    node.s = total > 0.0 ? ell[i] / total : 0.0;
    curve.nodes.push_back(std::move(node));
  }
  return curve;
}

namespace {

Vec project_warm(const Surface& surface, const Segment& segment, double s, const Vec& start,
                 const ProjectionOptions& options) {
  const Vec x = segment.at(s);
  if (auto local = local_closest_point(surface, x, start, options.max_iterations)) return local->footpoint;
  try {
    return closest_point(surface, x, options).footpoint;
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "shadow curve: projection failed at s = " << format_number(s) << ": " << e.what();
    throw Error(ErrorKind::Convergence, msg.str(), s);
  }
}

std::vector<double> cumulative_chords(const std::vector<Vec>& pts) {
  std::vector<double> ell(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) ell[i] = ell[i - 1] + (pts[i] - pts[i - 1]).norm();
  return ell;
}

double chord_spread(const std::vector<double>& ell) {
  const std::size_t n = ell.size() - 1;
  const double mean = ell.back() / static_cast<double>(n);
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(ell[i + 1] - ell[i] - mean));
  return spread;
}

}  // namespace

ShadowCurve build_shadow(const Surface& surface, const Segment& segment, const ShadowOptions& options) {
  validate_segment(surface, segment);
  const int n = options.nodes;
  if (n < 16) throw Error(ErrorKind::InvalidInput, "build_shadow: at least 16 intervals are required");

  const auto cold = project_samples(surface, segment, n + 1, options.projection);
  ShadowCurve out;
  out.clearance = std::numeric_limits<double>::infinity();
  for (const auto& p : cold) out.clearance = std::min(out.clearance, p.uniqueness_margin);
  if (!(out.clearance > kClearanceFloor)) {
    std::ostringstream msg;
    msg << "build_shadow: segment meets the medial axis (clearance " << format_number(out.clearance) << ")";
    throw Error(ErrorKind::Precondition, msg.str());
  }

  std::vector<double> s(static_cast<std::size_t>(n + 1));
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) s[i] = static_cast<double>(i) / n;
  pts.front() = segment.a();
  pts.back() = segment.b();
  for (int i = 1; i < n; ++i) {
    pts[i] = options.warm_start ? project_warm(surface, segment, s[i], pts[i - 1], options.projection)
                                : cold[static_cast<std::size_t>(i)].footpoint;
  }

  std::vector<double> ell = cumulative_chords(pts);
  if (options.resample) {
    double previous = std::numeric_limits<double>::infinity();
    int slow = 0;
    for (int sweep = 0; sweep < options.max_resample_sweeps; ++sweep) {
      const double mean = ell.back() / n;
      const double spread = chord_spread(ell);
      if (spread <= 1e-11 * mean) break;
      // Give up on grids that stop contracting (unresolved kinks near the medial axis).
      slow = spread > 0.5 * previous ? slow + 1 : 0;
      if (slow == 3) break;
      previous = spread;
      const HermiteSpline arc(s, ell);
      std::vector<double> s_next = s;
      for (int i = 1; i < n; ++i) s_next[i] = std::clamp(arc.inverse(i * mean), 0.0, 1.0);
      for (int i = 1; i < n; ++i) {
        if (!(s_next[i] > s_next[i - 1])) s_next[i] = std::nextafter(s_next[i - 1], 1.0);
        pts[i] = project_warm(surface, segment, s_next[i], pts[i], options.projection);
      }
      s = std::move(s_next);
      ell = cumulative_chords(pts);
      out.resample_sweeps = sweep + 1;
    }
  }
  out.chord_spread = chord_spread(ell);

  out.curve.nodes.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& node = out.curve.nodes[i];
    node.point = std::move(pts[i]);
    node.s = s[i];
    node.ell = ell[i];
  }
  return out;
}

SampledCurve derivatives(SampledCurve curve) {
  const std::size_t count = curve.nodes.size();
  if (count < 5) throw Error(ErrorKind::InvalidInput, "derivatives: at least five nodes are required");
  const std::size_t n = count - 1;
  const double h = curve.length() / static_cast<double>(n);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "derivatives: curve has zero length");
  auto p = [&](std::size_t i) -> const Vec& { return curve.nodes[i].point; };

  for (std::size_t i = 0; i < count; ++i) {
    auto& node = curve.nodes[i];
    node.d1.reset();
    node.d2.reset();
    if (i == 0 || i == n) continue;
    node.d2 = Vec((p(i + 1) - 2.0 * p(i) + p(i - 1)) / (h * h));
    if (i == 1) node.d1 = Vec((-3.0 * p(0) - 10.0 * p(1) + 18.0 * p(2) - 6.0 * p(3) + p(4)) / (12.0 * h));
    else if (i == n - 1)
      node.d1 = Vec((3.0 * p(n) + 10.0 * p(n - 1) - 18.0 * p(n - 2) + 6.0 * p(n - 3) - p(n - 4)) / (12.0 * h));
    else node.d1 = Vec((-p(i + 2) + 8.0 * p(i + 1) - 8.0 * p(i - 1) + p(i - 2)) / (12.0 * h));
  }
  return curve;
}

double speed_constancy_check(const SampledCurve& curve) {
  double worst = 0.0;
  for (const auto& node : curve.nodes)
    if (node.d1) worst = std::max(worst, std::abs(node.d1->norm() - 1.0));
  return worst;
}

void write_csv(std::ostream& os, const SampledCurve& curve) {
  const int dim = curve.dimension();
  os << "s,ell";
  for (int k = 0; k < dim; ++k) os << ",x" << k;
  for (int k = 0; k < dim; ++k) os << ",d1_" << k;
  for (int k = 0; k < dim; ++k) os << ",d2_" << k;
  os << '\n';
  for (const auto& node : curve.nodes) {
    os << format_number(node.s) << ',' << format_number(node.ell);
    for (int k = 0; k < dim; ++k) os << ',' << format_number(node.point[k]);
    for (const auto* d : {&node.d1, &node.d2})
      for (int k = 0; k < dim; ++k) {
        os << ',';
        if (*d) os << format_number((**d)[k]);
      }
    os << '\n';
  }
}

// ------------------------------------------------------------ binary cache

namespace {

constexpr char kMagic[4] = {'S', 'G', 'C', 'V'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

void put_vec(std::ostream& os, const Vec& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

bool get_vec(std::istream& is, Vec& v, std::uint32_t dim) {
  v.resize(dim);
  return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(dim * sizeof(double))));
}

}  // namespace

void write_curve_cache(const std::filesystem::path& path, const SampledCurve& curve, std::uint64_t key) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot open cache file for writing: " + path.string());
  os.write(kMagic, sizeof kMagic);
  put(os, kCurveCacheVersion);
  put(os, key);
  put(os, static_cast<std::uint32_t>(curve.dimension()));
  put(os, static_cast<std::uint64_t>(curve.size()));
  for (const auto& node : curve.nodes) {
    put(os, node.s);
    put(os, node.ell);
    put_vec(os, node.point);
    const std::uint8_t flags = (node.d1 ? 1u : 0u) | (node.d2 ? 2u : 0u);
    put(os, flags);
    if (node.d1) put_vec(os, *node.d1);
    if (node.d2) put_vec(os, *node.d2);
  }
  if (!os) throw Error(ErrorKind::InvalidInput, "failed writing cache file: " + path.string());
}

std::optional<SampledCurve> read_curve_cache(const std::filesystem::path& path, std::uint64_t key) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t stored_key = 0;
  std::uint32_t dim = 0;
  std::uint64_t count = 0;
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  if (!get(is, version) || version != kCurveCacheVersion) return std::nullopt;
  if (!get(is, stored_key) || stored_key != key) return std::nullopt;
  if (!get(is, dim) || !get(is, count) || dim < 1 || dim > kMaxDimension || count > (1u << 26)) return std::nullopt;
  SampledCurve curve;
  curve.nodes.resize(count);
  for (auto& node : curve.nodes) {
    std::uint8_t flags = 0;
    if (!get(is, node.s) || !get(is, node.ell) || !get_vec(is, node.point, dim) || !get(is, flags)) return std::nullopt;
    if (flags & 1u) {
      Vec d;
      if (!get_vec(is, d, dim)) return std::nullopt;
      node.d1 = std::move(d);
    }
    if (flags & 2u) {
      Vec d;
      if (!get_vec(is, d, dim)) return std::nullopt;
      node.d2 = std::move(d);
    }
  }
  return curve;
}

}  // namespace shadowgeo
