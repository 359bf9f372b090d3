#include "mixcurv/polygon_area.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

// Squared radius of the vertex cloud about its centroid.
double squared_extent(const Polygon2& p) {
  Vec2 c = Vec2::Zero();
  for (const auto& v : p.vertices()) c += v;
  c /= static_cast<double>(p.size());
  double r2 = 0.0;
  for (const auto& v : p.vertices()) r2 = std::max(r2, (v - c).squaredNorm());
  return r2;
}

void require_same_length(const Polygon2& p, const Polygon2& q) {
  if (p.size() != q.size())
    fail(ErrorKind::LengthMismatch, "polygons have " + std::to_string(p.size()) + " and " +
                                        std::to_string(q.size()) + " vertices");
}

}  // namespace

Polygon2::Polygon2(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) fail(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  for (const auto& v : vertices_)
    if (!v.allFinite()) fail(ErrorKind::NonFinite, "polygon vertex is not finite");
}

const Vec2& Polygon2::at(std::ptrdiff_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((k % n) + n) % n)];
}

Polygon2 Polygon2::translated(const Vec2& v) const {
  std::vector<Vec2> out(vertices_);
  for (auto& p : out) p += v;
  return Polygon2(std::move(out));
}

Polygon2 Polygon2::reversed() const {
  return Polygon2(std::vector<Vec2>(vertices_.rbegin(), vertices_.rend()));
}

Polygon2 Polygon2::rotated(std::size_t k) const {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < vertices_.size(); ++i) out.push_back(vertices_[(i + k) % vertices_.size()]);
  return Polygon2(std::move(out));
}

Polygon2 combine(double a, const Polygon2& p, double b, const Polygon2& q) {
  require_same_length(p, q);
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(a * p[i] + b * q[i]);
  return Polygon2(std::move(out));
}

double area(const Polygon2& p) {
  const Vec2& o = p[0];
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) sum += cross2(p[i] - o, p[i + 1] - o);
  return 0.5 * sum;
}

double mixed_area(const Polygon2& p, const Polygon2& q) {
  require_same_length(p, q);
  const std::size_t n = p.size();
  const Vec2& po = p[0];
  const Vec2& qo = q[0];
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    sum += cross2(p[i] - po, q[j] - qo) + cross2(q[i] - qo, p[j] - po);
  }
  return 0.25 * sum;
}

Polygon2 concat(const Polygon2& first, const Polygon2& second, const SharedChain& chain,
                double rel_tol) {
  const std::size_t n1 = first.size();
  const std::size_t n2 = second.size();
  const std::size_t k = chain.edge_count;
  if (k == 0 || k >= n1 || k >= n2 || n1 + n2 < 2 * k + 3)
    fail(ErrorKind::EdgesDoNotCancel, "shared chain length " + std::to_string(k) + " is not admissible");
  double scale = 1.0;
  for (const auto& v : first.vertices()) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (const auto& v : second.vertices()) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const auto s1 = static_cast<std::ptrdiff_t>(chain.start_first);
  const auto s2 = static_cast<std::ptrdiff_t>(chain.start_second);
  for (std::ptrdiff_t t = 0; t <= static_cast<std::ptrdiff_t>(k); ++t)
    if ((first.at(s1 + t) - second.at(s2 - t)).norm() > rel_tol * scale)
      fail(ErrorKind::EdgesDoNotCancel, "shared chain vertex " + std::to_string(t) + " does not coincide");

  std::vector<Vec2> out;
  const auto kk = static_cast<std::ptrdiff_t>(k);
  for (std::ptrdiff_t i = s1 + kk; i < s1 + static_cast<std::ptrdiff_t>(n1); ++i) out.push_back(first.at(i));
  for (std::ptrdiff_t i = s2; i < s2 + static_cast<std::ptrdiff_t>(n2) - kk; ++i) out.push_back(second.at(i));
  return Polygon2(std::move(out));
}

const char* to_string(SignatureClass c) {
  switch (c) {
    case SignatureClass::indefinite: return "indefinite";
    case SignatureClass::positive_definite: return "positive-definite";
    case SignatureClass::negative_definite: return "negative-definite";
    case SignatureClass::semidefinite: return "semidefinite";
    case SignatureClass::degenerate: return "degenerate";
  }
  return "unknown";
}

bool quad_in_convex_position(const Polygon2& p, double rel_tol) {
  if (p.size() != 4) fail(ErrorKind::InvalidArgument, "convex-position test expects a quad");
  const double tol = rel_tol * squared_extent(p);
  auto sign = [&](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double o = orient(a, b, c);
    return o > tol ? 1 : (o < -tol ? -1 : 0);
  };
  static constexpr std::array<std::array<int, 3>, 4> others{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};
  for (int v = 0; v < 4; ++v) {
    const auto& o = others[static_cast<std::size_t>(v)];
    const Vec2& a = p[static_cast<std::size_t>(o[0])];
    const Vec2& b = p[static_cast<std::size_t>(o[1])];
    const Vec2& c = p[static_cast<std::size_t>(o[2])];
    if (sign(a, b, c) == 0) return false;
    const Vec2& x = p[static_cast<std::size_t>(v)];
    const int s1 = sign(a, b, x), s2 = sign(b, c, x), s3 = sign(c, a, x);
    if (s1 == 0 || s2 == 0 || s3 == 0) return false;
    if (s1 == s2 && s2 == s3) return false;
  }
  return true;
}

SignatureReport quad_signature(const Polygon2& p) {
  if (p.size() != 4) fail(ErrorKind::InvalidArgument, "signature is defined for quads only");
  const double ext = squared_extent(p);
  if (!(ext > 0.0)) fail(ErrorKind::DegenerateBeyondTriangle, "all vertices coincide");
  const double tol = 1e-12 * ext;

  std::vector<std::size_t> collinear_corners;
  for (std::size_t k = 0; k < 4; ++k)
    if (std::abs(orient(p.at(static_cast<std::ptrdiff_t>(k) - 1), p[k], p.at(static_cast<std::ptrdiff_t>(k) + 1))) <= tol)
      collinear_corners.push_back(k);
  if (collinear_corners.size() >= 2)
    fail(ErrorKind::DegenerateBeyondTriangle, "quad has " + std::to_string(collinear_corners.size()) +
                                                  " collinear vertex triples");

  SignatureReport report;
  // The frame corner sits at index 1; in the triangle case the degenerate
  // corner is moved to index 3, which puts it on the segment (1,0)-(0,1).
  report.frame_offset = collinear_corners.empty() ? 0 : (collinear_corners.front() + 1) % 4;
  const Polygon2 q = p.rotated(report.frame_offset);
  Eigen::Matrix2d frame;
  frame.col(0) = q[2] - q[1];
  frame.col(1) = q[0] - q[1];
  const Vec2 st = frame.partialPivLu().solve(q[3] - q[1]);
  report.s = st.x();
  report.t = st.y();
  report.convex_position = quad_in_convex_position(p);

  if (!collinear_corners.empty()) {
    report.classification = SignatureClass::semidefinite;
    report.determinant = 0.0;
    return report;
  }
  const double s = report.s, t = report.t;
  report.determinant = (1.0 - s - t) / (s * t);
  if (report.determinant < 0.0) {
    report.classification = SignatureClass::indefinite;
  } else if (report.determinant > 0.0) {
    // The area of a parallel quad with q3 = (x,y) is -1/2 (x,y) M (x,y)^T with
    // M = [[(t-1)/s, -1], [-1, (s-1)/t]], scaled by det(frame).
    const double leading = -0.5 * (t - 1.0) / s * (frame.determinant() > 0.0 ? 1.0 : -1.0);
    report.classification =
        leading > 0.0 ? SignatureClass::positive_definite : SignatureClass::negative_definite;
  } else {
    report.classification = SignatureClass::degenerate;
  }
  return report;
}

AreaPolynomial area_polynomial_roots(const Polygon2& p, const Polygon2& q) {
  require_same_length(p, q);
  AreaPolynomial r;
  r.a = area(p);
  r.b = mixed_area(p, q);
  r.c = area(q);
  const double scale2 = std::max(squared_extent(p), squared_extent(q));
  const double zero = 1e-14 * scale2;
  if (std::abs(r.a) <= zero && std::abs(r.c) <= zero)
    fail(ErrorKind::BothAreasZero, "both polygons have vanishing area");
  r.discriminant = r.b * r.b - r.a * r.c;
  r.is_square = std::abs(r.discriminant) <= 1e-12 * (r.b * r.b + std::abs(r.a * r.c));

  if (std::abs(r.a) <= zero) {
    if (r.b != 0.0) r.roots.push_back(-r.c / (2.0 * r.b));
    return r;
  }
  if (r.is_square) {
    r.roots = {-r.b / r.a, -r.b / r.a};
    return r;
  }
  if (r.discriminant < 0.0) return r;
  const double root = std::sqrt(r.discriminant);
  const double qq = -(r.b + std::copysign(root, r.b));
  double x1 = qq / r.a;
  double x2 = r.c / qq;
  if (x1 > x2) std::swap(x1, x2);
  r.roots = {x1, x2};
  return r;
}

}  // namespace mixcurv
