#include "shadowgeo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "shadowgeo/geodesic.hpp"
#include "shadowgeo/io.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/shadow_curve.hpp"
#include "shadowgeo/surfaces.hpp"

namespace fs = std::filesystem;

namespace shadowgeo {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidInput, msg); }

Vec to_vec(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) invalid(std::string(what) + ": expected a non-empty number array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) invalid(std::string(what) + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  require_finite(v, what);
  return v;
}

Json from_vec(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

double number(const Json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number()) invalid(std::string("surface: missing number '") + key + "'");
  return spec[key].get<double>();
}

double number_or(const Json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number()) invalid(std::string("expected a number for '") + key + "'");
  return spec[key].get<double>();
}

int dimension_of(const Json& spec, int fallback) {
  if (!spec.contains("dimension")) return fallback;
  if (!spec["dimension"].is_number_integer()) invalid("surface: 'dimension' must be an integer");
  return spec["dimension"].get<int>();
}

std::optional<Box> box_of(const Json& spec) {
  if (!spec.contains("box")) return std::nullopt;
  const Json& b = spec["box"];
  if (!b.is_object()) invalid("surface: 'box' must be an object with 'lo' and 'hi'");
  return Box{to_vec(b.value("lo", Json()), "box.lo"), to_vec(b.value("hi", Json()), "box.hi")};
}

// Numbers in reports: JSON has no infinity, so non-finite values become strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

ProfilePtr make_profile(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    invalid("profile: expected an object with a 'kind'");
  const auto kind = spec["kind"].get<std::string>();
  if (kind == "constant") return std::make_shared<ConstantProfile>(number(spec, "c"));
  if (kind == "affine") return std::make_shared<AffineProfile>(number(spec, "c0"), number(spec, "c1"));
  if (kind == "sphere-cap") return std::make_shared<SphereCapProfile>(number(spec, "rho"));
  if (kind == "parabolic") return std::make_shared<ParabolicProfile>(number(spec, "c0"), number(spec, "c2"));
  if (kind == "table") {
    const auto x = spec.value("x", Json());
    const auto r = spec.value("R", Json());
    if (!x.is_array() || !r.is_array()) invalid("profile table: 'x' and 'R' arrays are required");
    auto xs = x.get<std::vector<double>>();
    auto rs = r.get<std::vector<double>>();
    if (spec.contains("slopes")) return std::make_shared<TableProfile>(xs, rs, spec["slopes"].get<std::vector<double>>());
    return std::make_shared<TableProfile>(xs, rs);
  }
  invalid("profile: unknown kind '" + kind + "'");
}

SurfacePtr make_surface(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    invalid("surface: expected an object with a 'kind'");
  const auto kind = spec["kind"].get<std::string>();
  const auto box = box_of(spec);
  try {
    if (kind == "sphere") {
      const Vec center = spec.contains("center") ? to_vec(spec["center"], "sphere center")
                                                 : Vec::Zero(dimension_of(spec, 3));
      return std::make_shared<Sphere>(number(spec, "radius"), center, box);
    }
    if (kind == "cylinder") {
      const int n = dimension_of(spec, spec.contains("axis") ? static_cast<int>(spec["axis"].size()) : 3);
      const Vec axis = spec.contains("axis") ? to_vec(spec["axis"], "cylinder axis") : Vec::Unit(n, n - 1);
      return std::make_shared<Cylinder>(number(spec, "radius"), axis, box);
    }
    if (kind == "ellipsoid") return std::make_shared<Ellipsoid>(to_vec(spec.value("semi_axes", Json()), "semi_axes"), box);
    if (kind == "torus") return std::make_shared<Torus>(number(spec, "major"), number(spec, "minor"), box);
    if (kind == "plane")
      return std::make_shared<Plane>(to_vec(spec.value("normal", Json()), "plane normal"), number_or(spec, "offset", 0.0), box);
    if (kind == "revolution") {
      const auto interval = spec.value("interval", Json());
      if (!interval.is_array() || interval.size() != 2) invalid("revolution: 'interval' must be [lo, hi]");
      return std::make_shared<RevolutionSurface>(make_profile(spec.value("profile", Json())), interval[0].get<double>(),
                                                 interval[1].get<double>(), dimension_of(spec, 3));
    }
    if (kind == "graph") {
      if (!spec.contains("expression") || !spec["expression"].is_string()) invalid("graph: 'expression' is required");
      std::optional<Box> domain;
      if (spec.contains("domain")) {
        const Json& d = spec["domain"];
        domain = Box{to_vec(d.value("lo", Json()), "domain.lo"), to_vec(d.value("hi", Json()), "domain.hi")};
      }
      return std::make_shared<GraphSurface>(spec["expression"].get<std::string>(), dimension_of(spec, 3), domain);
    }
  } catch (const Json::exception& e) {
    invalid(std::string("surface: ") + e.what());
  }
  invalid("surface: unknown kind '" + kind + "'");
}

const std::vector<std::string>& known_reports() {
  static const std::vector<std::string> reports = {"contraction", "shadow", "defect", "clairaut", "canal"};
  return reports;
}

Scenario Scenario::from_json(const Json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) invalid("scenario: expected a JSON object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
    invalid("scenario: missing integer 'schema_version'");
  if (doc["schema_version"].get<int>() != kScenarioSchemaVersion)
    invalid("scenario: unsupported schema_version " + doc["schema_version"].dump());
  Scenario sc;
  sc.base_dir = base_dir;
  try {
    sc.name = doc.value("name", std::string("scenario"));
    if (sc.name.empty() || sc.name.find_first_of("/\\") != std::string::npos)
      invalid("scenario: 'name' must be a non-empty file-name-safe string");
    sc.surface_spec = doc.value("surface", Json());
    sc.surface = make_surface(sc.surface_spec);
    sc.A = to_vec(doc.value("A", Json()), "A");
    sc.B = to_vec(doc.value("B", Json()), "B");
    sc.N = doc.value("N", 512);
    sc.tol = doc.value("tol", kDefaultDefectTolerance);
    sc.planar_tol = doc.value("planar_tol", kDefaultPlanarTolerance);
    if (doc.contains("reports")) sc.reports = doc["reports"].get<std::vector<std::string>>();
    else sc.reports = {"contraction", "shadow", "defect"};
    sc.output_dir = doc.value("output_dir", std::string());
    sc.seed = doc.value("seed", std::uint64_t{0x5eed});
    sc.seeds = doc.value("seeds", 16);
    sc.expected_inconclusive = doc.value("expected_inconclusive", false);
  } catch (const Json::exception& e) {
    invalid(std::string("scenario: ") + e.what());
  }
  for (const auto& r : sc.reports)
    if (std::find(known_reports().begin(), known_reports().end(), r) == known_reports().end())
      invalid("scenario: unknown report '" + r + "'");
  if (sc.N < 16) invalid("scenario: N must be at least 16");
  if (!(sc.tol > 0.0) || !(sc.planar_tol > 0.0)) invalid("scenario: tolerances must be positive");
  if (sc.seeds < 1) invalid("scenario: seeds must be at least 1");
  const int n = sc.surface->dimension();
  require_dimension(sc.A, n, "A");
  require_dimension(sc.B, n, "B");
  validate_segment(*sc.surface, Segment(sc.A, sc.B));
  return sc;
}

Scenario Scenario::load(const fs::path& path) {
  std::ifstream is(path);
  if (!is) invalid("cannot open scenario file: " + path.string());
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const Json::exception& e) {
    invalid("scenario: parse error: " + std::string(e.what()));
  }
  auto sc = from_json(doc, path.parent_path());
  if (!doc.contains("name")) sc.name = path.stem().string();
  return sc;
}

Json Scenario::to_json() const {
  Json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = name;
  j["surface"] = surface_spec;
  j["A"] = from_vec(A);
  j["B"] = from_vec(B);
  j["N"] = N;
  j["tol"] = tol;
  j["planar_tol"] = planar_tol;
  j["reports"] = reports;
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["seeds"] = seeds;
  j["expected_inconclusive"] = expected_inconclusive;
  return j;
}

std::uint64_t Scenario::hash() const {
  Json j = to_json();
  j.erase("output_dir");
  j.erase("name");
  j["cache_version"] = kCurveCacheVersion;
  return fnv1a64(j.dump());
}

bool Scenario::wants(const std::string& report) const {
  return std::find(reports.begin(), reports.end(), report) != reports.end();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::OffSurface:
    case ErrorKind::DegenerateSurface: return kExitInvalidInput;
    case ErrorKind::Precondition: return kExitInconclusive;
    default: return kExitNumerical;
  }
}

std::optional<fs::path> env_output_root() {
  const char* env = std::getenv("SHADOWGEO_OUTPUT_DIR");
  if (env && *env) return fs::path(env);
  return std::nullopt;
}

fs::path resolve_output_dir(const Scenario& scenario, const RunOptions& options) {
  if (options.output_root) return *options.output_root / scenario.name;
  if (auto root = env_output_root()) return *root / scenario.name;
  if (!scenario.output_dir.empty()) {
    const fs::path p(scenario.output_dir);
    return p.is_absolute() ? p : scenario.base_dir / p;
  }
  return fs::path("shadowgeo-out") / scenario.name;
}

// ------------------------------------------------------------ running

namespace {

struct ClairautMapping {
  std::shared_ptr<RevolutionSurface> surface;
  Vec origin;
  Mat basis;
};

// Sphere, cylinder and revolution surfaces as a revolution surface about
// the first local axis.
std::optional<ClairautMapping> clairaut_mapping(const Surface& surface, const SampledCurve& curve) {
  const int n = surface.dimension();
  if (n < 3) return std::nullopt;
  if (const auto* s = dynamic_cast<const Sphere*>(&surface)) {
    const double rho = s->radius();
    return ClairautMapping{std::make_shared<RevolutionSurface>(std::make_shared<SphereCapProfile>(rho), -rho, rho, n),
                           s->center(), Mat::Identity(n, n)};
  }
  if (const auto* c = dynamic_cast<const Cylinder*>(&surface)) {
    const Mat basis = axis_basis(c->axis());
    double lo = 0.0, hi = 0.0;
    for (const auto& node : curve.nodes) {
      const double x = c->axis().dot(node.point);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return ClairautMapping{std::make_shared<RevolutionSurface>(std::make_shared<ConstantProfile>(c->radius()), lo - 1.0,
                                                               hi + 1.0, n),
                           Vec::Zero(n), basis};
  }
  if (const auto* r = dynamic_cast<const RevolutionSurface*>(&surface)) {
    return ClairautMapping{std::make_shared<RevolutionSurface>(r->profile_ptr(), r->lo(), r->hi(), n), Vec::Zero(n),
                           Mat::Identity(n, n)};
  }
  return std::nullopt;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  os << text;
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text(path, os.str());
}

Json error_json(const Error& e) {
  Json j;
  j["kind"] = to_string(e.kind());
  j["message"] = e.what();
  if (e.parameter()) j["s"] = *e.parameter();
  return j;
}

Json base_summary(const Scenario& sc) {
  Json s;
  s["schema_version"] = kScenarioSchemaVersion;
  s["scenario"] = sc.name;
  s["hash"] = hex64(sc.hash());
  s["surface"] = sc.surface->name();
  s["dimension"] = sc.surface->dimension();
  s["N"] = sc.N;
  s["expected_inconclusive"] = sc.expected_inconclusive;
  return s;
}

ProjectionOptions projection_options(const Scenario& sc, const RunOptions& options) {
  ProjectionOptions p;
  p.seeds = sc.seeds;
  p.rng_seed = sc.seed;
  p.threads = options.threads;
  return p;
}

Json canal_json(const CanalSurface& canal, const TangencyReport& tangency) {
  const auto [sphere_res, tangent_res] = canal.envelope_residuals();
  Json j;
  j["knots"] = canal.knots().size();
  j["envelope_sphere_residual"] = sphere_res;
  j["envelope_tangency_residual"] = tangent_res;
  j["max_normal_angle"] = tangency.max_angle;
  j["tangency_passed"] = tangency.max_angle < 1e-5;
  return j;
}

void write_canal_csv(std::ostream& os, const CanalSurface& canal) {
  os << "t,r,r_prime,X,rho\n";
  for (const auto& k : canal.knots())
    os << format_number(k.t) << ',' << format_number(k.r) << ',' << format_number(k.r_prime) << ','
       << format_number(k.X) << ',' << format_number(k.rho) << '\n';
}

void write_tangency_csv(std::ostream& os, const SampledCurve& curve, const TangencyReport& report) {
  os << "s,ell,angle\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    os << format_number(curve.nodes[i].s) << ',' << format_number(curve.nodes[i].ell) << ',';
    if (!std::isnan(report.angles[i])) os << format_number(report.angles[i]);
    os << '\n';
  }
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& options) {
  RunResult result;
  result.output_dir = resolve_output_dir(sc, options);
  result.summary = base_summary(sc);
  Json& summary = result.summary;
  if (options.write_files) fs::create_directories(result.output_dir);
  const fs::path out = result.output_dir;

  const Segment segment(sc.A, sc.B);
  const ProjectionOptions popts = projection_options(sc, options);
  bool audits_ok = true;
  bool definitive = false;

  try {
    const auto contraction = contraction_audit(*sc.surface, segment, sc.N + 1, popts);
    summary["clearance"] = num(contraction.clearance);
    summary["contraction"] = {{"max_ratio", contraction.max_ratio},
                              {"max_abs_r_prime", contraction.max_abs_r_prime},
                              {"passed", contraction.passed}};
    if (options.write_files && sc.wants("contraction"))
      write_with(out / "contraction.csv", [&](std::ostream& os) { write_csv(os, contraction); });
    audits_ok = audits_ok && contraction.passed;

    AuditOptions aopts;
    aopts.nodes = sc.N;
    aopts.tol = sc.tol;
    aopts.planar_tol = sc.planar_tol;
    aopts.shadow.projection = popts;
    const fs::path cache = out / "shadow.bin";
    const std::uint64_t key = sc.hash();
    std::optional<SampledCurve> cached;
    if (options.reuse_cache) cached = read_curve_cache(cache, key);
    Theorem1Report t1;
    if (cached) {
      ShadowCurve shadow;
      shadow.curve = std::move(*cached);
      shadow.clearance = contraction.clearance;
      shadow.resample_sweeps = -1;
      t1 = theorem1_audit(*sc.surface, segment, std::move(shadow), aopts);
    } else {
      t1 = theorem1_audit(*sc.surface, segment, aopts);
    }
    const SampledCurve& curve = t1.shadow.curve;
    summary["shadow"] = {{"length", curve.length()},
                         {"nodes", curve.size()},
                         {"resample_sweeps", t1.shadow.resample_sweeps},
                         {"chord_spread", t1.shadow.chord_spread},
                         {"resolved", t1.resolved},
                         {"speed_dev", t1.geodesic.speed_dev},
                         {"from_cache", cached.has_value()}};
    summary["geodesic"] = {{"defect", t1.geodesic.defect},
                           {"tol", t1.tol},
                           {"verdict", geodesic_label(t1.geodesic.verdict)},
                           {"excluded_nodes", t1.geodesic.excluded_nodes}};
    summary["coplanarity"] = {{"residual", t1.coplanarity.residual},
                              {"planar_tol", t1.planar_tol},
                              {"verdict", coplanar_label(t1.planar_verdict)},
                              {"normal", from_vec(t1.coplanarity.normal)}};
    summary["consistent"] = t1.consistent;
    definitive = t1.definitive;
    audits_ok = audits_ok && t1.consistent;

    if (options.write_files) {
      if (sc.wants("shadow")) write_with(out / "shadow.csv", [&](std::ostream& os) { write_csv(os, curve); });
      if (sc.wants("defect")) write_with(out / "defect.csv", [&](std::ostream& os) { write_csv(os, curve, t1.geodesic); });
      if (!cached) write_curve_cache(cache, curve, key);
    }

    if (sc.wants("clairaut")) {
      if (auto mapping = clairaut_mapping(*sc.surface, curve)) {
        const auto local = to_frame(curve, mapping->origin, mapping->basis);
        const auto table = clairaut_invariants(*mapping->surface, local);
        summary["clairaut"] = {{"product_mean", table.product_mean}, {"product_drift", table.product_drift},
                               {"wedge_mean", table.wedge_mean},     {"wedge_drift", table.wedge_drift},
                               {"form_gap", table.form_gap},         {"on_axis_nodes", table.on_axis_nodes}};
        if (options.write_files) write_with(out / "clairaut.csv", [&](std::ostream& os) { write_csv(os, table); });
      } else {
        summary["clairaut"] = {{"skipped", "surface is not a surface of revolution"}};
      }
    }

    if (sc.wants("canal")) {
      try {
        const auto canal = canal_from_segment(*sc.surface, segment, sc.N, popts);
        const auto tangency = tangency_check(*sc.surface, canal, curve);
        summary["canal"] = canal_json(canal, tangency);
        audits_ok = audits_ok && tangency.max_angle < 1e-5;
        if (options.write_files) {
          write_with(out / "canal.csv", [&](std::ostream& os) { write_canal_csv(os, canal); });
          write_with(out / "tangency.csv", [&](std::ostream& os) { write_tangency_csv(os, curve, tangency); });
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Precondition) throw;
        summary["canal"] = {{"skipped", e.what()}};
        audits_ok = false;
      }
    }
    result.exit_code = (definitive && audits_ok) ? kExitDefinitive : kExitInconclusive;
  } catch (const Error& e) {
    summary["error"] = error_json(e);
    result.exit_code = exit_code_for(e.kind());
    if (e.kind() == ErrorKind::Precondition) definitive = false;
  }

  if (result.exit_code <= kExitInconclusive && !definitive) {
    // Fail-closed: verdicts without a definitive audit are inconclusive.
    summary["definitive"] = false;
    if (summary.contains("geodesic")) summary["geodesic"]["reported_verdict"] = "inconclusive";
  } else {
    summary["definitive"] = definitive;
  }
  summary["exit_code"] = result.exit_code;
  if (options.write_files) write_text(out / "summary.json", summary.dump(2) + "\n");
  return result;
}

RunResult run_scenario_file(const fs::path& path, const RunOptions& options) {
  Scenario sc;
  try {
    sc = Scenario::load(path);
  } catch (const Error& e) {
    RunResult r;
    r.exit_code = exit_code_for(e.kind()) == kExitNumerical ? kExitNumerical : kExitInvalidInput;
    r.summary = {{"schema_version", kScenarioSchemaVersion},
                 {"scenario", path.stem().string()},
                 {"error", error_json(e)},
                 {"exit_code", r.exit_code}};
    return r;
  }
  return run_scenario(sc, options);
}

RunResult run_canal(const Scenario& sc, const RunOptions& options) {
  RunResult result;
  result.output_dir = resolve_output_dir(sc, options);
  result.summary = base_summary(sc);
  if (options.write_files) fs::create_directories(result.output_dir);
  const fs::path out = result.output_dir;
  try {
    const Segment segment(sc.A, sc.B);
    const auto popts = projection_options(sc, options);
    const auto canal = canal_from_segment(*sc.surface, segment, sc.N, popts);
    ShadowOptions sopts;
    sopts.nodes = sc.N;
    sopts.projection = popts;
    const auto shadow = build_shadow(*sc.surface, segment, sopts);
    const auto tangency = tangency_check(*sc.surface, canal, shadow.curve);
    result.summary["canal"] = canal_json(canal, tangency);
    const auto [sphere_res, tangent_res] = canal.envelope_residuals();
    const bool ok = tangency.max_angle < 1e-5 && sphere_res <= 1e-8 && tangent_res <= 1e-8;
    result.exit_code = ok ? kExitDefinitive : kExitInconclusive;
    if (options.write_files) {
      write_with(out / "canal.csv", [&](std::ostream& os) { write_canal_csv(os, canal); });
      write_with(out / "tangency.csv", [&](std::ostream& os) { write_tangency_csv(os, shadow.curve, tangency); });
    }
  } catch (const Error& e) {
    result.summary["error"] = error_json(e);
    result.exit_code = exit_code_for(e.kind());
  }
  result.summary["exit_code"] = result.exit_code;
  if (options.write_files) write_text(out / "canal-summary.json", result.summary.dump(2) + "\n");
  return result;
}

// ------------------------------------------------------------ suites

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double sign() { return (rng_() >> 63) ? 1.0 : -1.0; }
  Vec gaussian(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      const double u1 = 1.0 - uniform(0.0, 1.0);
      const double u2 = uniform(0.0, 1.0);
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    return v;
  }
  Vec unit(int n) { return gaussian(n).normalized(); }
  /// Unit vector orthogonal to u.
  Vec orthogonal(const Vec& u) {
    Vec v = gaussian(static_cast<int>(u.size()));
    v -= v.dot(u) * u;
    return v.normalized();
  }

 private:
  std::mt19937_64 rng_;
};

Json scenario_doc(const std::string& name, const Json& surface, const Vec& a, const Vec& b, std::uint64_t seed,
                  bool flagged) {
  Json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = name;
  j["surface"] = surface;
  j["A"] = from_vec(a);
  j["B"] = from_vec(b);
  j["N"] = 512;
  j["tol"] = kDefaultDefectTolerance;
  j["planar_tol"] = kDefaultPlanarTolerance;
  j["reports"] = {"contraction", "shadow", "defect"};
  j["seed"] = seed;
  j["seeds"] = 16;
  j["expected_inconclusive"] = flagged;
  return j;
}

std::string suite_name(const std::string& kind, int dim, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%dd-%03d", kind.c_str(), dim, i);
  return buf;
}

Json sphere_case(Stream& rng, int n, bool flagged) {
  const double rho = rng.uniform(0.6, 1.8);
  const Vec c = 0.5 * Vec::NullaryExpr(n, [&] { return rng.uniform(-1.0, 1.0); });
  const Vec u = rng.unit(n);
  const Vec w = rng.orthogonal(u);
  const double theta = flagged ? std::numbers::pi - 1e-7 : rng.uniform(0.4, 2.6);
  Json s = {{"kind", "sphere"}, {"radius", rho}, {"center", from_vec(c)}};
  return Json{{"surface", s}, {"A", from_vec(c + rho * u)},
              {"B", from_vec(c + rho * (std::cos(theta) * u + std::sin(theta) * w))}};
}

Json cylinder_case(Stream& rng, int n, int i, bool flagged) {
  const double R = rng.uniform(0.5, 1.5);
  const double h = rng.uniform(0.5, 1.5);
  double phi = rng.sign() * rng.uniform(0.5, 2.6);
  if (i % 4 == 1) phi = std::numbers::pi;
  if (flagged) phi = 1e-7;
  Vec a = Vec::Zero(n), b = Vec::Zero(n);
  a[0] = -R;
  b[0] = R * std::cos(phi);
  b[1] = R * std::sin(phi);
  b[n - 1] = h;
  if (phi == std::numbers::pi) b[1] = 0.0;
  Json s = {{"kind", "cylinder"}, {"radius", R}, {"axis", from_vec(Vec::Unit(n, n - 1))}};
  return Json{{"surface", s}, {"A", from_vec(a)}, {"B", from_vec(b)}};
}

Json revolution_case(Stream& rng, int n, int i, bool flagged) {
  Json profile;
  double lo = 0.0, hi = 0.0;
  switch (i % 4) {
    case 0:
      profile = {{"kind", "constant"}, {"c", rng.uniform(0.6, 1.4)}};
      lo = -2.0, hi = 2.0;
      break;
    case 1:
      profile = {{"kind", "affine"}, {"c0", rng.uniform(0.8, 1.2)}, {"c1", rng.uniform(-0.3, 0.3)}};
      lo = -1.5, hi = 1.5;
      break;
    case 2: {
      const double rho = rng.uniform(0.8, 1.5);
      profile = {{"kind", "sphere-cap"}, {"rho", rho}};
      lo = -0.9 * rho, hi = 0.9 * rho;
      break;
    }
    default:
      profile = {{"kind", "parabolic"}, {"c0", rng.uniform(0.6, 1.2)}, {"c2", rng.uniform(0.1, 0.4)}};
      lo = -1.2, hi = 1.2;
  }
  const RevolutionSurface surface(make_profile(profile), lo, hi, n);
  const double span = 0.7 * (hi - lo) / 2.0;
  const double xa = rng.uniform(-span, span);
  const double xb = rng.uniform(-span, span);
  Vec e = Vec::Zero(n), f = Vec::Zero(n);
  e.tail(n - 1) = rng.unit(n - 1);
  f.tail(n - 1) = rng.orthogonal(Vec(e.tail(n - 1)));
  double psi = (i % 3 == 0) ? 0.0 : rng.uniform(0.5, 2.2);
  if (flagged) psi = std::numbers::pi - 1e-7;
  const Vec radial_b = std::cos(psi) * e + std::sin(psi) * f;
  Json s = {{"kind", "revolution"}, {"profile", profile}, {"interval", {lo, hi}}, {"dimension", n}};
  return Json{{"surface", s}, {"A", from_vec(surface.point(xa, e))}, {"B", from_vec(surface.point(xb, radial_b))}};
}

std::string graph_expression(const std::vector<double>& coef, int n, bool linear) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < n - 1; ++k) {
    const std::string var = n == 3 ? std::string(k == 0 ? "x" : "y") : "x" + std::to_string(k + 1);
    if (k > 0) os << " + ";
    os << coef[static_cast<std::size_t>(k)] << "*" << var << (linear ? "" : "^2");
  }
  return os.str();
}

Json graph_case(Stream& rng, int n, int i, bool flagged) {
  const bool linear = i % 4 == 3 && !flagged;
  std::vector<double> coef;
  for (int k = 0; k < n - 1; ++k)
    coef.push_back(flagged ? 1.0 : (linear ? rng.uniform(-0.4, 0.4) : rng.uniform(0.1, 0.3)));
  const std::string expr = graph_expression(coef, n, linear);
  const GraphSurface surface(expr, n);
  Vec base_a(n - 1), base_b(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    base_a[k] = rng.uniform(-0.8, 0.8);
    base_b[k] = rng.uniform(-0.8, 0.8);
  }
  if (flagged) {
    // Chord across the vertex of a steep paraboloid passes next to its focal axis.
    base_a.setZero();
    base_b.setZero();
    base_a[0] = 1.2;
    base_b[0] = -1.2;
    base_a[n - 2] += 1e-7;
  }
  auto lift = [&](const Vec& base) {
    Vec p(n);
    p.head(n - 1) = base;
    p[n - 1] = surface.height(base);
    return p;
  };
  Json s = {{"kind", "graph"}, {"expression", expr}, {"dimension", n}};
  return Json{{"surface", s}, {"A", from_vec(lift(base_a))}, {"B", from_vec(lift(base_b))}};
}

}  // namespace

const std::vector<std::string>& suite_kinds() {
  static const std::vector<std::string> kinds = {"sphere", "cylinder", "revolution", "graph"};
  return kinds;
}

std::vector<Json> generate_suite(const std::string& kind, int count, std::uint64_t seed, int dimension) {
  if (std::find(suite_kinds().begin(), suite_kinds().end(), kind) == suite_kinds().end())
    invalid("generate_suite: unknown kind '" + kind + "'");
  if (count < 1) invalid("generate_suite: count must be at least 1");
  if (dimension < 3 || dimension > kMaxDimension) invalid("generate_suite: dimension must be in [3, 8]");
  std::vector<Json> docs;
  Stream rng(seed ^ fnv1a64(kind));
  for (int i = 0; i < count; ++i) {
    const bool flagged = i % 5 == 4;
    Json parts;
    if (kind == "sphere") parts = sphere_case(rng, dimension, flagged);
    else if (kind == "cylinder") parts = cylinder_case(rng, dimension, i, flagged);
    else if (kind == "revolution") parts = revolution_case(rng, dimension, i, flagged);
    else parts = graph_case(rng, dimension, i, flagged);
    const Vec a = to_vec(parts["A"], "A");
    const Vec b = to_vec(parts["B"], "B");
    docs.push_back(scenario_doc(suite_name(kind, dimension, i), parts["surface"], a, b, seed + static_cast<std::uint64_t>(i),
                                flagged));
  }
  return docs;
}

Json merge_reports(const fs::path& dir) {
  if (!fs::is_directory(dir)) invalid("merge_reports: not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "summary.json") files.push_back(entry.path());
  std::vector<Json> summaries;
  for (const auto& f : files) {
    std::ifstream is(f);
    try {
      summaries.push_back(Json::parse(is));
    } catch (const Json::exception& e) {
      invalid("merge_reports: cannot parse " + f.string() + ": " + e.what());
    }
  }
  std::sort(summaries.begin(), summaries.end(), [](const Json& a, const Json& b) {
    return a.value("scenario", std::string()) < b.value("scenario", std::string());
  });
  int definitive = 0, consistent = 0, inconclusive = 0, errors = 0, flagged = 0;
  for (const auto& s : summaries) {
    const bool def = s.value("definitive", false);
    if (s.contains("error") && s["error"].value("kind", std::string()) != "precondition") ++errors;
    else if (def) {
      ++definitive;
      if (s.value("consistent", false)) ++consistent;
    } else {
      ++inconclusive;
    }
    if (s.value("expected_inconclusive", false)) ++flagged;
  }
  Json merged;
  merged["schema_version"] = kScenarioSchemaVersion;
  merged["scenarios"] = summaries;
  merged["totals"] = {{"count", summaries.size()}, {"definitive", definitive},     {"consistent", consistent},
                      {"inconclusive", inconclusive}, {"errors", errors}, {"expected_inconclusive", flagged}};
  return merged;
}

}  // namespace shadowgeo
