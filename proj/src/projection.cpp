#include "shadowgeo/projection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "shadowgeo/io.hpp"
#include "shadowgeo/parallel.hpp"

namespace shadowgeo {

Segment::Segment(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) throw Error(ErrorKind::InvalidInput, "segment endpoints differ in dimension");
  require_finite(a_, "segment endpoint A");
  require_finite(b_, "segment endpoint B");
  if (!((b_ - a_).norm() > 1e-12)) throw Error(ErrorKind::InvalidInput, "degenerate segment: A = B");
}

void validate_segment(const Surface& surface, const Segment& segment) {
  require_dimension(segment.a(), surface.dimension(), "segment");
  for (const Vec* p : {&segment.a(), &segment.b()}) {
    if (!surface.on_surface(*p)) {
      std::ostringstream msg;
      msg << "segment endpoint off surface, |F| = " << std::abs(surface.value(*p));
      throw Error(ErrorKind::OffSurface, msg.str());
    }
  }
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Gauss-Newton descent onto the level set along the gradient ray.
std::optional<Vec> ray_project(const Surface& surface, Vec p, double max_step) {
  for (int iter = 0; iter < 100; ++iter) {
    const double f = surface.value(p);
    const Vec g = surface.gradient(p);
    const double gg = g.squaredNorm();
    if (!(gg > kDegenerateGradient * kDegenerateGradient) || !std::isfinite(f)) return std::nullopt;
    Vec step = (f / gg) * g;
    const double len = step.norm();
    if (len > max_step) step *= max_step / len;
    p -= step;
    if (len <= 1e-15 * (1.0 + p.norm())) break;
  }
  if (!p.allFinite() || !surface.on_surface(p)) return std::nullopt;
  return p;
}

struct NewtonOutcome {
  Vec p;
  double lambda = 0.0;
  bool converged = false;
};

NewtonOutcome lagrange_newton(const Surface& surface, const Vec& x, Vec p, int max_iterations) {
  const auto n = x.size();
  const double scale = 1.0 + x.norm();
  Vec g = surface.gradient(p);
  double lambda = (x - p).dot(g) / std::max(g.squaredNorm(), 1e-300);

  auto residual = [&](const Vec& pp, double lam, const Vec& gg) {
    Vec r(n + 1);
    r.head(n) = pp - x + lam * gg;
    r[n] = surface.value(pp);
    return r;
  };

  Vec res = residual(p, lambda, g);
  // Once the residual is small, a few extra full steps take it to roundoff.
  int polish = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double gnorm = g.norm();
    if (!(gnorm > kDegenerateGradient)) return {p, lambda, false};
    if (res.head(n).norm() <= 1e-12 * scale && std::abs(res[n]) / gnorm <= 1e-13 * scale) {
      if (polish == 2 || res.head(n).norm() <= 1e-16 * scale) return {p, lambda, true};
      ++polish;
    }

    Mat jac(n + 1, n + 1);
    jac.topLeftCorner(n, n) = Mat::Identity(n, n) + lambda * surface.hessian(p);
    jac.topRightCorner(n, 1) = g;
    jac.bottomLeftCorner(1, n) = g.transpose();
    jac(n, n) = 0.0;
    const Vec step = -jac.completeOrthogonalDecomposition().solve(res);
    if (!step.allFinite()) return {p, lambda, false};

    const double merit = 0.5 * res.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      const Vec p_try = p + alpha * step.head(n);
      const double lam_try = lambda + alpha * step[n];
      const Vec g_try = surface.gradient(p_try);
      const Vec res_try = residual(p_try, lam_try, g_try);
      if (res_try.allFinite() && 0.5 * res_try.squaredNorm() <= (1.0 - 2e-4 * alpha) * merit) {
        p = p_try;
        lambda = lam_try;
        g = g_try;
        res = res_try;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (polish > 0) return {p, lambda, true};
      // Stalled at roundoff level counts as converged when already tight.
      const bool tight = res.head(n).norm() <= 1e-10 * scale && std::abs(res[n]) / gnorm <= 1e-11 * scale;
      return {p, lambda, tight};
    }
  }
  const double gnorm = g.norm();
  const bool ok = gnorm > kDegenerateGradient && res.head(n).norm() <= 1e-10 * scale &&
                  std::abs(res[n]) / gnorm <= 1e-11 * scale;
  return {p, lambda, ok};
}

/// Second-order check: the Lagrangian Hessian I + lambda H restricted to the
/// tangent space is positive semidefinite.
bool is_local_minimum(const Surface& surface, const Vec& p, double lambda) {
  const auto n = p.size();
  const Vec nu = unit_normal(surface, p);
  const Eigen::HouseholderQR<Mat> qr(nu);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat t = q.rightCols(n - 1);
  const Mat lag = Mat::Identity(n, n) + lambda * surface.hessian(p);
  const Mat m = t.transpose() * lag * t;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -1e-8;
}

struct Candidate {
  Vec p;
  double distance;
};

std::optional<Candidate> solve_from(const Surface& surface, const Vec& x, const Vec& start, int max_iterations,
                                    double max_step) {
  const auto on = ray_project(surface, start, max_step);
  if (!on) return std::nullopt;
  NewtonOutcome out = lagrange_newton(surface, x, *on, max_iterations);
  if (!out.converged || !out.p.allFinite()) return std::nullopt;
  // Polish onto the level set; Newton already satisfies it to roundoff.
  if (const auto polished = ray_project(surface, out.p, max_step)) out.p = *polished;
  try {
    if (!is_local_minimum(surface, out.p, out.lambda)) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return Candidate{out.p, (x - out.p).norm()};
}

}  // namespace

std::optional<ProjectionResult> local_closest_point(const Surface& surface, const Vec& x, const Vec& start,
                                                    int max_iterations) {
  require_dimension(x, surface.dimension(), "local_closest_point");
  require_dimension(start, surface.dimension(), "local_closest_point start");
  const double max_step = std::max(1.0, surface.bounds().diameter());
  const auto cand = solve_from(surface, x, start, max_iterations, max_step);
  if (!cand) return std::nullopt;
  ProjectionResult result;
  result.query = x;
  result.footpoint = cand->p;
  result.distance = cand->distance;
  result.clusters = 1;
  result.converged = true;
  if (surface.on_surface(x) && result.distance <= on_surface_tolerance(x)) {
    result.footpoint = x;
    result.distance = 0.0;
  }
  return result;
}

ProjectionResult closest_point(const Surface& surface, const Vec& x, const ProjectionOptions& options) {
  require_dimension(x, surface.dimension(), "closest_point");
  require_finite(x, "closest_point query");
  if (options.seeds < 1) throw Error(ErrorKind::InvalidInput, "closest_point: seeds must be at least 1");

  const Box box = surface.bounds();
  const double max_step = std::max(1.0, box.diameter());
  std::vector<Candidate> candidates;

  const bool query_on_surface = surface.on_surface(x);
  if (query_on_surface) candidates.push_back({x, 0.0});

  std::mt19937_64 rng(options.rng_seed);
  for (int k = 0; k < options.seeds; ++k) {
    Vec start = x;
    if (k > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i)
        start[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * uniform01(rng);
    }
    if (auto cand = solve_from(surface, x, start, options.max_iterations, max_step)) candidates.push_back(*cand);
  }

  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "closest_point: no start converged (" << options.seeds << " seeds)";
    throw Error(ErrorKind::Convergence, msg.str());
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.distance < r.distance; });
  std::vector<const Candidate*> clusters;
  for (const auto& c : candidates) {
    const bool merged = std::any_of(clusters.begin(), clusters.end(), [&](const Candidate* rep) {
      return (rep->p - c.p).norm() < options.cluster_tolerance;
    });
    if (!merged) clusters.push_back(&c);
  }

  ProjectionResult result;
  result.query = x;
  result.footpoint = clusters.front()->p;
  result.distance = clusters.front()->distance;
  result.clusters = static_cast<int>(clusters.size());
  result.converged = true;
  if (clusters.size() > 1) result.uniqueness_margin = clusters[1]->distance - clusters[0]->distance;
  return result;
}

std::vector<ProjectionResult> project_samples(const Surface& surface, const Segment& segment, int samples,
                                              const ProjectionOptions& options) {
  if (samples < 2) throw Error(ErrorKind::InvalidInput, "at least two samples are required");
  require_dimension(segment.a(), surface.dimension(), "segment");
  std::vector<ProjectionResult> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), resolve_threads(options.threads), [&](std::size_t i) {
    const double s = static_cast<double>(i) / (samples - 1);
    try {
      out[i] = closest_point(surface, segment.at(s), options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Convergence) throw;
      std::ostringstream msg;
      msg << e.what() << " at s = " << format_number(s);
      throw Error(ErrorKind::Convergence, msg.str(), s);
    }
  });
  return out;
}

double medial_clearance(const Surface& surface, const Segment& segment, int samples,
                        const ProjectionOptions& options) {
  const auto projections = project_samples(surface, segment, samples, options);
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& p : projections) clearance = std::min(clearance, p.uniqueness_margin);
  return clearance;
}

ContractionAudit contraction_audit(const Segment& segment, const std::vector<ProjectionResult>& projections) {
  const std::size_t m = projections.size();
  if (m < 3) throw Error(ErrorKind::InvalidInput, "contraction audit needs at least three samples");
  ContractionAudit audit;
  audit.clearance = std::numeric_limits<double>::infinity();
  for (const auto& p : projections) audit.clearance = std::min(audit.clearance, p.uniqueness_margin);
  if (!(audit.clearance > kClearanceFloor)) {
    std::ostringstream msg;
    msg << "contraction audit: medial clearance " << format_number(audit.clearance) << " is not positive";
    throw Error(ErrorKind::Precondition, msg.str());
  }

  const double ds = 1.0 / static_cast<double>(m - 1);
  const double step = ds * segment.length();
  audit.samples.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = audit.samples[i];
    row.s = static_cast<double>(i) * ds;
    row.r = projections[i].distance;
    row.uniqueness_margin = projections[i].uniqueness_margin;
    row.converged = projections[i].converged;
  }
  auto r = [&](std::size_t i) { return audit.samples[i].r; };
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = audit.samples[i];
    if (i == 0) row.r_prime = (-3.0 * r(0) + 4.0 * r(1) - r(2)) / (2.0 * step);
    else if (i + 1 == m) row.r_prime = (3.0 * r(m - 1) - 4.0 * r(m - 2) + r(m - 3)) / (2.0 * step);
    else row.r_prime = (r(i + 1) - r(i - 1)) / (2.0 * step);
    const std::size_t j = i + 1 < m ? i : i - 1;
    row.lipschitz_ratio = std::abs(r(j + 1) - r(j)) / step;
    audit.max_ratio = std::max(audit.max_ratio, row.lipschitz_ratio);
    audit.max_abs_r_prime = std::max(audit.max_abs_r_prime, std::abs(row.r_prime));
  }
  audit.passed = audit.max_ratio < kContractionThreshold;
  return audit;
}

ContractionAudit contraction_audit(const Surface& surface, const Segment& segment, int samples,
                                   const ProjectionOptions& options) {
  return contraction_audit(segment, project_samples(surface, segment, samples, options));
}

void write_csv(std::ostream& os, const ContractionAudit& audit) {
  os << "s,r,r_prime,lipschitz_ratio,uniqueness_margin,converged\n";
  for (const auto& row : audit.samples) {
    os << format_number(row.s) << ',' << format_number(row.r) << ',' << format_number(row.r_prime) << ','
       << format_number(row.lipschitz_ratio) << ',' << format_number(row.uniqueness_margin) << ','
       << (row.converged ? 1 : 0) << '\n';
  }
}

}  // namespace shadowgeo
