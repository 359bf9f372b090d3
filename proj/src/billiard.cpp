#include "mixcurv/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mixcurv/curvature.hpp"
#include "mixcurv/error.hpp"
#include "mixcurv/rotational.hpp"

namespace mixcurv {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

void check_turns(const std::vector<Vec2>& p) {
  for (std::size_t i = 0; i + 2 < p.size(); ++i) {
    const Vec2 u = p[i + 1] - p[i], v = p[i + 2] - p[i + 1];
    if (std::abs(cross2(u, v)) <= 1e-12 * u.norm() * v.norm())
      fail(ErrorKind::CollinearTriple, "trajectory vertices " + std::to_string(i) + ".." +
                                           std::to_string(i + 2) + " are collinear");
  }
}

BilliardTrajectory confocal(const Ellipse& e, const ConfocalMode& mode, double tol) {
  const double c = e.focal_distance();
  const double ap = mode.a_prime;
  if (!(ap > e.a())) fail(ErrorKind::InvalidArgument, "confocal semi-major axis must exceed a");
  if (mode.bounces == 0) fail(ErrorKind::InvalidArgument, "at least one bounce required");
  const double bp = std::sqrt(ap * ap - c * c);
  const double a = e.a(), b = e.b();

  BilliardTrajectory t;
  t.confocal_a_prime = ap;
  Vec2 p(ap * std::cos(mode.start_param), bp * std::sin(mode.start_param));
  t.vertices.push_back(p);

  // Initial direction: towards the tangency point that keeps E on the left.
  const double rad = std::hypot(p.x() / a, p.y() / b);
  if (!(rad - 1.0 > 1e-12)) fail(ErrorKind::TangencyLost, "start point too close to the caustic");
  const double psi = std::atan2(p.y() / b, p.x() / a);
  const Vec2 touch = e.point(psi + std::acos(1.0 / rad));
  Vec2 d = (touch - p).normalized();

  for (std::size_t i = 0; i < mode.bounces; ++i) {
    const double residual = e.tangency_residual(p, d);
    t.max_tangency_residual = std::max(t.max_tangency_residual, residual);
    if (residual > tol * a)
      fail(ErrorKind::TangencyLost, "segment " + std::to_string(i) + " misses the caustic by " + std::to_string(residual));
    t.tangency_points.push_back(e.touching_point(p, d));
    // Second intersection of p + s d with E'.
    const double num = p.x() * d.x() / (ap * ap) + p.y() * d.y() / (bp * bp);
    const double den = d.x() * d.x() / (ap * ap) + d.y() * d.y() / (bp * bp);
    const Vec2 q = p - 2.0 * num / den * d;
    t.vertices.push_back(q);
    const Vec2 n = Vec2(q.x() / (ap * ap), q.y() / (bp * bp)).normalized();
    d = d - 2.0 * d.dot(n) * n;
    p = q;
  }
  check_turns(t.vertices);
  return t;
}

BilliardTrajectory free_trajectory(const Ellipse& e, const FreeMode& mode) {
  const auto& phi = mode.tangent_params;
  if (phi.size() < 3) fail(ErrorKind::InvalidArgument, "free trajectory needs at least three tangents");
  const double dir = phi[1] > phi[0] ? 1.0 : -1.0;
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
    const double step = dir * (phi[i + 1] - phi[i]);
    if (!(step > 0.0) || !(step < std::numbers::pi))
      fail(ErrorKind::InvalidArgument, "tangent parameters must be strictly monotone with gaps below pi");
  }
  BilliardTrajectory t;
  for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
    // x cos(phi)/a + y sin(phi)/b = 1 for both parameters.
    const double a11 = std::cos(phi[i]) / e.a(), a12 = std::sin(phi[i]) / e.b();
    const double a21 = std::cos(phi[i + 1]) / e.a(), a22 = std::sin(phi[i + 1]) / e.b();
    const double det = a11 * a22 - a12 * a21;
    t.vertices.emplace_back((a22 - a12) / det, (a11 - a21) / det);
  }
  for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
    t.tangency_points.push_back(e.point(phi[i]));
    t.max_tangency_residual = std::max(t.max_tangency_residual,
                                       e.tangency_residual(t.vertices[i - 1], t.vertices[i] - t.vertices[i - 1]));
  }
  check_turns(t.vertices);
  return t;
}

}  // namespace

Ellipse::Ellipse(double a, double b) : a_(a), b_(b) {
  if (!(b > 0.0) || !(a >= b) || !std::isfinite(a)) fail(ErrorKind::InvalidArgument, "ellipse needs a >= b > 0");
}

double Ellipse::focal_distance() const { return std::sqrt((a_ - b_) * (a_ + b_)); }

Vec2 Ellipse::point(double phi) const { return {a_ * std::cos(phi), b_ * std::sin(phi)}; }

double Ellipse::tangency_residual(const Vec2& p, const Vec2& d) const {
  const Vec2 n = Vec2(-d.y(), d.x()).normalized();
  return std::abs(std::hypot(a_ * n.x(), b_ * n.y()) - std::abs(n.dot(p)));
}

Vec2 Ellipse::touching_point(const Vec2& p, const Vec2& d) const {
  const Vec2 n = Vec2(-d.y(), d.x()).normalized();
  const double off = n.dot(p);
  return Vec2(a_ * a_ * n.x(), b_ * b_ * n.y()) / off;
}

BilliardTrajectory billiard_trajectory(const Ellipse& e, const BilliardMode& mode, double tol) {
  if (const auto* c = std::get_if<ConfocalMode>(&mode)) return confocal(e, *c, tol);
  return free_trajectory(e, std::get<FreeMode>(mode));
}

RolledTraces roll_to_line(const BilliardTrajectory& t, const Ellipse& e) {
  const auto& p = t.vertices;
  if (p.size() < 2) fail(ErrorKind::InvalidArgument, "trajectory needs a segment");
  for (std::size_t i = 0; i + 2 < p.size(); ++i) {
    const Vec2 u = p[i + 1] - p[i], v = p[i + 2] - p[i + 1];
    if (std::abs(cross2(u, v)) <= 1e-12 * u.norm() * v.norm())
      fail(ErrorKind::ReflectionAmbiguity, "vertices " + std::to_string(i) + ".." + std::to_string(i + 2) + " are collinear");
  }
  const Vec2 fa = e.focus_a(), fb = e.focus_b();
  RolledTraces out;
  out.axis_positions.push_back(0.0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double len = (p[i + 1] - p[i]).norm();
    const Vec2 u = (p[i + 1] - p[i]) / len;
    const Vec2 v(-u.y(), u.x());
    const double x = out.axis_positions.back();
    const Vec2 wb = fb - p[i], wa = fa - p[i];
    // The side of the segment that holds the foci is mapped to y > 0 for B.
    const double side = wb.dot(v) >= 0.0 ? 1.0 : -1.0;
    out.b_trace.emplace_back(x + wb.dot(u), side * wb.dot(v));
    out.a_trace.emplace_back(x + wa.dot(u), -side * wa.dot(v));
    out.r.push_back(out.b_trace.back().y());
    out.r_prime.push_back(-out.a_trace.back().y());
    out.axis_positions.push_back(x + len);
  }
  double lo = 0.0, hi = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < out.b_trace.size(); ++i) {
    const double l = (out.a_trace[i] - out.b_trace[i]).norm();
    lo = i == 0 ? l : std::min(lo, l);
    hi = i == 0 ? l : std::max(hi, l);
    sum += l;
  }
  out.l = sum / static_cast<double>(out.b_trace.size());
  out.l_spread = hi - lo;
  for (const auto& q : p) out.focal_sums.push_back((q - fa).norm() + (q - fb).norm());
  if (t.confocal_a_prime) out.d = 2.0 * *t.confocal_a_prime;
  return out;
}

DelaunayPair delaunay_pair(const RolledTraces& traces, double alpha, std::size_t copies) {
  const std::size_t n = traces.b_trace.size();
  if (n < 2 || traces.a_trace.size() != n) fail(ErrorKind::InvalidArgument, "traces need at least two points");
  const double l = traces.l;
  MeridianSpec ms, mts;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& b = traces.b_trace[i];
    const Vec2& a = traces.a_trace[i];
    // Meridian (r, h) = (y, x): the rolling line becomes the rotation axis.
    ms.r.push_back(b.y());
    ms.h.push_back(b.x());
    ms.r_star.push_back((a.y() - b.y()) / l);
    ms.h_star.push_back((a.x() - b.x()) / l);
    mts.r.push_back(a.y());
    mts.h.push_back(a.x());
    mts.r_star.push_back(-(a.y() - b.y()) / l);
    mts.h_star.push_back(-(a.x() - b.x()) / l);
  }
  DelaunayPair out{rot_surface(ms, alpha, copies), rot_surface(mts, alpha, copies), {}};
  DelaunayReport& rep = out.report;
  rep.l = l;
  rep.d = traces.d;
  for (Index f = 0; f < out.m.m().face_count(); ++f) {
    rep.H_m.push_back(face_curvatures(out.m, f).H);
    rep.H_mt.push_back(face_curvatures(out.mt, f).H);
    rep.max_H_deviation = std::max({rep.max_H_deviation, std::abs(rep.H_m.back() - 1.0 / l),
                                    std::abs(rep.H_mt.back() - 1.0 / l)});
    rep.cross_ratios_m.push_back(face_cross_ratio(out.m.m().face_points(f)));
    rep.cross_ratios_mt.push_back(face_cross_ratio(out.mt.m().face_points(f)));
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.edge_products.push_back((traces.a_trace[i + 1] - traces.a_trace[i]).norm() *
                                (traces.b_trace[i + 1] - traces.b_trace[i]).norm());
  if (!rep.cross_ratios_m.empty()) {
    auto [lo, hi] = std::minmax_element(rep.cross_ratios_m.begin(), rep.cross_ratios_m.end());
    double mn = *lo, mx = *hi;
    for (double v : rep.cross_ratios_mt) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    rep.cross_ratio_spread = mx - mn;
  }
  return out;
}

double face_cross_ratio(std::span<const Vec3> quad, double rel_tol) {
  if (quad.size() != 4) fail(ErrorKind::InvalidArgument, "cross-ratio needs four points");
  const FacePlane plane = fit_face_plane(quad);
  std::complex<double> z[4];
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 q = plane.project(quad[k]);
    z[k] = {q.x(), q.y()};
  }
  const std::complex<double> cr = (z[0] - z[1]) * (z[2] - z[3]) / ((z[1] - z[2]) * (z[3] - z[0]));
  if (!std::isfinite(cr.real()) || std::abs(cr.imag()) > rel_tol * std::abs(cr) ||
      plane.residual > rel_tol * (quad[0] - quad[2]).norm())
    fail(ErrorKind::NotConcyclic, "quad vertices are not concyclic");
  return cr.real();
}

}  // namespace mixcurv
