#include "mixcurv/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

void check_lengths(const MeridianSpec& ms) {
  const std::size_t n = ms.r.size();
  if (ms.h.size() != n || ms.r_star.size() != n || ms.h_star.size() != n)
    fail(ErrorKind::LengthMismatch, "meridian sequences differ in length");
  if (n < 2) fail(ErrorKind::InvalidArgument, "meridian needs at least two points");
}

void check_parallelity(const MeridianSpec& ms) {
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    const double dr = ms.r[i + 1] - ms.r[i], dh = ms.h[i + 1] - ms.h[i];
    const double drs = ms.r_star[i + 1] - ms.r_star[i], dhs = ms.h_star[i + 1] - ms.h_star[i];
    const double lm = std::hypot(dr, dh), ls = std::hypot(drs, dhs);
    if (std::abs(dr * dhs - drs * dh) > 1e-9 * lm * std::max(1.0, ls))
      fail(ErrorKind::ParallelityViolated, "meridian step " + std::to_string(i) + " is not parallel to its Gauss step");
  }
}

std::vector<Vec3> revolve(const std::vector<double>& r, const std::vector<double>& h,
                          const std::vector<Eigen::Matrix2d>& maps) {
  std::vector<Vec3> pts;
  for (const auto& mk : maps)
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Vec2 xy = r[i] * mk.col(0);
      pts.emplace_back(xy.x(), xy.y(), h[i]);
    }
  return pts;
}

std::vector<double> expand_steps(const std::vector<double>& values, std::size_t steps, const char* what) {
  if (values.size() == 1) return std::vector<double>(steps, values.front());
  if (values.size() != steps)
    fail(ErrorKind::LengthMismatch, std::string(what) + " needs one value or one per step");
  return values;
}

void check_generator_input(const std::vector<double>& r_star, const std::vector<double>& h_star, double r0) {
  if (r_star.size() != h_star.size()) fail(ErrorKind::LengthMismatch, "r* and h* differ in length");
  if (r_star.empty()) fail(ErrorKind::InvalidArgument, "empty Gauss meridian");
  if (!(r0 > 0.0)) fail(ErrorKind::InvalidArgument, "initial radius must be positive");
  for (double v : r_star)
    if (!(v > 0.0)) fail(ErrorKind::InvalidArgument, "Gauss meridian radii must be positive");
}

bool horizontal(double rs0, double rs1) { return std::abs(rs1 - rs0) <= 1e-14 * std::max(rs0, rs1); }

}  // namespace

double MeridianSpec::parallelity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    worst = std::max(worst, std::abs((r[i + 1] - r[i]) * (h_star[i + 1] - h_star[i]) -
                                     (r_star[i + 1] - r_star[i]) * (h[i + 1] - h[i])));
  return worst;
}

ParallelPair rot_surface(const MeridianSpec& ms, double alpha, std::size_t copies) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) fail(ErrorKind::InvalidArgument, "rotation half-angle must lie in (0, pi)");
  if (copies == 0) fail(ErrorKind::InvalidArgument, "at least one copy required");
  const double sweep = 2.0 * alpha * static_cast<double>(copies);
  const bool closed = std::abs(sweep - 2.0 * std::numbers::pi) <= 1e-12 * 2.0 * std::numbers::pi;
  const std::size_t count = closed ? copies : copies + 1;
  std::vector<Eigen::Matrix2d> maps;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * alpha * static_cast<double>(k);
    Eigen::Matrix2d rot;
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    maps.push_back(rot);
  }
  return rot_surface(ms, maps, closed);
}

ParallelPair rot_surface(const MeridianSpec& ms, const std::vector<Eigen::Matrix2d>& maps, bool closed) {
  check_lengths(ms);
  check_parallelity(ms);
  if (maps.size() < (closed ? 3u : 2u)) fail(ErrorKind::InvalidArgument, "too few meridian copies");
  const std::size_t n = ms.size();
  const std::size_t copies = maps.size();
  const std::size_t bands = closed ? copies : copies - 1;
  std::vector<std::vector<Index>> faces;
  for (std::size_t k = 0; k < bands; ++k) {
    const std::size_t k2 = (k + 1) % copies;
    for (std::size_t i = 0; i + 1 < n; ++i)
      faces.push_back({k * n + i, k * n + i + 1, k2 * n + i + 1, k2 * n + i});
  }
  auto comb = build_combinatorics(copies * n, std::move(faces));
  Mesh m(comb, revolve(ms.r, ms.h, maps));
  Mesh s(comb, revolve(ms.r_star, ms.h_star, maps));
  return ParallelPair(std::move(m), std::move(s));
}

PrincipalCurvatures RotFaceCurvatures::principal() const {
  return {std::min(-kappa1_rot, -kappa2_rot), std::max(-kappa1_rot, -kappa2_rot)};
}

RotFaceCurvatures rot_face_curvatures(double r0, double r1, double rs0, double rs1) {
  if (std::abs(r1 - r0) <= 1e-14 * std::max(std::abs(r0), std::abs(r1)))
    fail(ErrorKind::EqualRadii, "consecutive meridian radii coincide");
  const double dr2 = r1 * r1 - r0 * r0;
  return {(r0 * rs0 - r1 * rs1) / dr2, (rs1 * rs1 - rs0 * rs0) / dr2, (rs1 + rs0) / (r1 + r0),
          (rs1 - rs0) / (r1 - r0)};
}

MeridianSpec gen_prescribed_H(const std::vector<double>& r_star, const std::vector<double>& h_star,
                              const std::vector<double>& H, double r0, double h0) {
  check_generator_input(r_star, h_star, r0);
  const std::size_t n = r_star.size();
  const std::vector<double> hs = expand_steps(H, n - 1, "H");
  MeridianSpec ms{{r0}, {h0}, r_star, h_star, {}};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ri = ms.r.back(), hi = ms.h.back();
    const double rsi = r_star[i], rs1 = r_star[i + 1];
    const double dhs = h_star[i + 1] - h_star[i];
    const double Hi = hs[i];
    if (horizontal(rsi, rs1)) {
      // Parallelity forces r_{i+1} = r_i; the face is an axis-parallel
      // trapezoid pair and H fixes the height step.
      const double den = 2.0 * Hi + rsi / ri;
      if (dhs == 0.0 || den == 0.0)
        fail(ErrorKind::NoPositiveRoot, "step " + std::to_string(i) + " admits no height for the prescribed H");
      ms.r.push_back(ri);
      ms.h.push_back(hi - dhs / den);
      ms.free_height_steps.push_back(i);
      continue;
    }
    // H x^2 + r*_{i+1} x - c = 0 with c = H r_i^2 + r_i r*_i.
    const double b = rs1;
    const double c = Hi * ri * ri + ri * rsi;
    const double disc = b * b + 4.0 * Hi * c;
    if (disc < 0.0) fail(ErrorKind::NoPositiveRoot, "step " + std::to_string(i) + " has no real radius");
    const double root = std::sqrt(disc);
    double x = (b + root) != 0.0 ? 2.0 * c / (b + root) : -1.0;
    if (!(x > 1e-12 * ri) && Hi != 0.0) x = (-b - root) / (2.0 * Hi);
    if (!(x > 1e-12 * ri)) fail(ErrorKind::NoPositiveRoot, "step " + std::to_string(i) + " has no positive radius");
    ms.r.push_back(x);
    ms.h.push_back(hi + (x - ri) * dhs / (rs1 - rsi));
  }
  return ms;
}

MeridianSpec gen_prescribed_K(const std::vector<double>& r_star, const std::vector<double>& h_star,
                              double K, double r0, double h0) {
  check_generator_input(r_star, h_star, r0);
  if (K == 0.0 || !std::isfinite(K)) fail(ErrorKind::InvalidArgument, "K must be finite and nonzero");
  MeridianSpec ms{{r0}, {h0}, r_star, h_star, {}};
  for (std::size_t i = 0; i + 1 < r_star.size(); ++i) {
    const double ri = ms.r.back(), hi = ms.h.back();
    const double rsi = r_star[i], rs1 = r_star[i + 1];
    const double dhs = h_star[i + 1] - h_star[i];
    if (horizontal(rsi, rs1)) {
      if (dhs == 0.0) fail(ErrorKind::InvalidArgument, "Gauss meridian repeats a point at step " + std::to_string(i));
      ms.r.push_back(ri);
      ms.h.push_back(hi + rsi * dhs / (K * ri));
      ms.free_height_steps.push_back(i);
      continue;
    }
    const double radicand = ri * ri + (rs1 * rs1 - rsi * rsi) / K;
    if (!(radicand > 0.0)) fail(ErrorKind::NegativeRadicand, "step " + std::to_string(i) + " has radicand " + std::to_string(radicand));
    const double x = std::sqrt(radicand);
    ms.r.push_back(x);
    ms.h.push_back(hi + (x - ri) * dhs / (rs1 - rsi));
  }
  return ms;
}

GaussMeridian spherical_gauss_meridian(const std::vector<double>& h_star) {
  GaussMeridian g{{}, h_star};
  for (double h : h_star) {
    if (!(std::abs(h) < 1.0)) fail(ErrorKind::OutOfRange, "Gauss meridian height " + std::to_string(h) + " outside (-1, 1)");
    g.r_star.push_back(std::sqrt((1.0 - h) * (1.0 + h)));
  }
  return g;
}

}  // namespace mixcurv
