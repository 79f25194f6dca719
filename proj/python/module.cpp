#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shadowgeo/cylinder_oracle.hpp"
#include "shadowgeo/geodesic.hpp"
#include "shadowgeo/projection.hpp"
#include "shadowgeo/revolution.hpp"
#include "shadowgeo/scenario.hpp"
#include "shadowgeo/shadow_curve.hpp"

namespace py = pybind11;
using namespace shadowgeo;

namespace {

Mat points_of(const SampledCurve& c) {
  Mat m(static_cast<Eigen::Index>(c.size()), c.dimension());
  for (std::size_t i = 0; i < c.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = c.nodes[i].point.transpose();
  return m;
}

Mat derivative_of(const SampledCurve& c, bool second) {
  Mat m = Mat::Constant(static_cast<Eigen::Index>(c.size()), c.dimension(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& d = second ? c.nodes[i].d2 : c.nodes[i].d1;
    if (d) m.row(static_cast<Eigen::Index>(i)) = d->transpose();
  }
  return m;
}

std::vector<double> column(const SampledCurve& c, bool ell) {
  std::vector<double> v;
  for (const auto& n : c.nodes) v.push_back(ell ? n.ell : n.s);
  return v;
}

py::dict curve_dict(const SampledCurve& c) {
  py::dict d;
  d["s"] = column(c, false);
  d["ell"] = column(c, true);
  d["points"] = points_of(c);
  d["d1"] = derivative_of(c, false);
  d["d2"] = derivative_of(c, true);
  return d;
}

ProjectionOptions projection_options(int seeds, std::uint64_t rng_seed) {
  ProjectionOptions o;
  o.seeds = seeds;
  o.rng_seed = rng_seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shadow curves of segments on implicit hypersurfaces";

  static py::exception<Error> error(m, "ShadowgeoError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = error;
      PyErr_SetObject(err.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
    }
  });

  py::class_<Surface, std::shared_ptr<Surface>>(m, "Surface")
      .def_property_readonly("dimension", &Surface::dimension)
      .def_property_readonly("name", &Surface::name)
      .def("value", &Surface::value)
      .def("gradient", &Surface::gradient)
      .def("hessian", &Surface::hessian)
      .def("on_surface", &Surface::on_surface);

  m.def("make_surface", [](const std::string& spec) { return std::const_pointer_cast<Surface>(make_surface(Json::parse(spec))); }, py::arg("spec_json"));

  m.def(
      "closest_point",
      [](const Surface& s, const Vec& x, int seeds, std::uint64_t rng_seed) {
        const auto r = closest_point(s, x, projection_options(seeds, rng_seed));
        return py::make_tuple(r.footpoint, r.distance, r.uniqueness_margin, r.clusters);
      },
      py::arg("surface"), py::arg("x"), py::arg("seeds") = 16, py::arg("rng_seed") = 0x5eedULL);

  m.def(
      "contraction_audit",
      [](const Surface& s, const Vec& a, const Vec& b, int samples) {
        ContractionAudit audit;
        {
          py::gil_scoped_release release;
          audit = contraction_audit(s, Segment(a, b), samples);
        }
        py::dict d;
        d["clearance"] = audit.clearance;
        d["max_ratio"] = audit.max_ratio;
        d["max_abs_r_prime"] = audit.max_abs_r_prime;
        d["passed"] = audit.passed;
        std::vector<double> s_col, r_col, rp_col;
        for (const auto& row : audit.samples) {
          s_col.push_back(row.s);
          r_col.push_back(row.r);
          rp_col.push_back(row.r_prime);
        }
        d["s"] = s_col;
        d["r"] = r_col;
        d["r_prime"] = rp_col;
        return d;
      },
      py::arg("surface"), py::arg("a"), py::arg("b"), py::arg("samples") = 257);

  m.def(
      "build_shadow",
      [](const Surface& s, const Vec& a, const Vec& b, int nodes, bool with_derivatives) {
        SampledCurve curve;
        {
          py::gil_scoped_release release;
          ShadowOptions o;
          o.nodes = nodes;
          curve = build_shadow(s, Segment(a, b), o).curve;
          if (with_derivatives) curve = derivatives(std::move(curve));
        }
        return curve_dict(curve);
      },
      py::arg("surface"), py::arg("a"), py::arg("b"), py::arg("nodes") = 512, py::arg("derivatives") = true);

  m.def(
      "theorem1_audit",
      [](const Surface& s, const Vec& a, const Vec& b, int nodes, double tol, double planar_tol) {
        Theorem1Report r;
        {
          py::gil_scoped_release release;
          AuditOptions o;
          o.nodes = nodes;
          o.tol = tol;
          o.planar_tol = planar_tol;
          r = theorem1_audit(s, Segment(a, b), o);
        }
        py::dict d;
        d["defect"] = r.geodesic.defect;
        d["speed_dev"] = r.geodesic.speed_dev;
        d["geodesic_verdict"] = geodesic_label(r.geodesic.verdict);
        d["residual"] = r.coplanarity.residual;
        d["coplanar_verdict"] = coplanar_label(r.planar_verdict);
        d["normal"] = r.coplanarity.normal;
        d["consistent"] = r.consistent;
        d["definitive"] = r.definitive;
        d["clearance"] = r.shadow.clearance;
        d["curve"] = curve_dict(r.shadow.curve);
        return d;
      },
      py::arg("surface"), py::arg("a"), py::arg("b"), py::arg("nodes") = 512, py::arg("tol") = kDefaultDefectTolerance,
      py::arg("planar_tol") = kDefaultPlanarTolerance);

  m.def(
      "integrate_geodesic",
      [](const Surface& s, const Vec& p0, const Vec& v0, double length, double step) {
        SampledCurve c;
        {
          py::gil_scoped_release release;
          c = integrate_geodesic(s, p0, v0, length, step);
        }
        return curve_dict(c);
      },
      py::arg("surface"), py::arg("p0"), py::arg("v0"), py::arg("length"), py::arg("step") = 1e-3);

  m.def(
      "clairaut_invariants",
      [](const Surface& s, const Mat& points, const Mat& tangents) {
        const auto* rev = dynamic_cast<const RevolutionSurface*>(&s);
        if (!rev) throw Error(ErrorKind::InvalidInput, "clairaut_invariants: not a surface of revolution");
        if (points.rows() != tangents.rows() || points.cols() != tangents.cols())
          throw Error(ErrorKind::InvalidInput, "clairaut_invariants: points and tangents differ in shape");
        SampledCurve c;
        double ell = 0.0;
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
          CurveNode n;
          n.point = points.row(i).transpose();
          if (i > 0) ell += (n.point - c.nodes.back().point).norm();
          n.ell = ell;
          n.d1 = Vec(tangents.row(i).transpose());
          c.nodes.push_back(std::move(n));
        }
        const auto t = clairaut_invariants(*rev, c);
        py::dict d;
        std::vector<double> product, wedge;
        for (const auto& row : t.rows) {
          product.push_back(row.product);
          wedge.push_back(row.wedge);
        }
        d["product"] = product;
        d["wedge"] = wedge;
        d["product_drift"] = t.product_drift;
        d["wedge_drift"] = t.wedge_drift;
        d["form_gap"] = t.form_gap;
        return d;
      },
      py::arg("surface"), py::arg("points"), py::arg("tangents"));

  py::class_<CylinderScenario>(m, "CylinderScenario")
      .def(py::init(&CylinderScenario::make), py::arg("R"), py::arg("h"), py::arg("a"), py::arg("b"))
      .def("point_T", &CylinderScenario::point_T)
      .def("point_Tprime", &CylinderScenario::point_Tprime)
      .def("sin_alpha", &CylinderScenario::sin_alpha)
      .def("alpha_prime", &CylinderScenario::alpha_prime)
      .def("is_trivial_geodesic_case", &CylinderScenario::is_trivial_geodesic_case);

  m.def(
      "run_scenario",
      [](const std::string& path, const std::string& out) {
        RunOptions o;
        if (!out.empty()) o.output_root = out;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario_file(path, o);
        }
        return py::make_tuple(r.exit_code, r.summary.dump());
      },
      py::arg("path"), py::arg("out") = "");

  m.def(
      "generate_suite",
      [](const std::string& kind, int count, std::uint64_t seed, int dim) {
        std::vector<std::string> out;
        for (const auto& d : generate_suite(kind, count, seed, dim)) out.push_back(d.dump(2));
        return out;
      },
      py::arg("kind"), py::arg("count"), py::arg("seed"), py::arg("dim") = 3);
}
