#include "mixcurv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixcurv/billiard.hpp"
#include "mixcurv/curvature.hpp"
#include "mixcurv/duality.hpp"
#include "mixcurv/error.hpp"
#include "mixcurv/io.hpp"
#include "mixcurv/mesh.hpp"
#include "mixcurv/rotational.hpp"

namespace mixcurv {

namespace {

namespace fs = std::filesystem;

struct RotParams {
  std::size_t samples = 30;
  double hmax = 0.9;
  double r0 = 1.0;
  double alpha = std::numbers::pi / 12.0;
  std::size_t copies = 0;
};

struct BilliardParams {
  double a = 2.0;
  double b = std::sqrt(3.0);
  double a_prime = 3.0;
  std::size_t bounces = 24;
  double alpha = std::numbers::pi / 12.0;
  std::size_t copies = 0;
  double start = 0.3;
  std::string surface = "m";
};

bool is_pair_path(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".json";
}

Mesh load_mesh(const fs::path& path) {
  const auto fmt = format_from_extension(path);
  if (!fmt) fail(ErrorKind::InvalidArgument, "cannot infer mesh format of " + path.string() + " (use .obj or .off)");
  return parse_mesh(path, *fmt);
}

ParallelPair load_pair(const fs::path& path) {
  PairFile pf = read_pair_file(path);
  return ParallelPair(std::move(pf.m), std::move(pf.s));
}

void emit(const Json& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << dump_json(doc) << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) fail(ErrorKind::IoError, "cannot write " + out_path);
  f << dump_json(doc) << '\n';
  if (!f) fail(ErrorKind::IoError, "cannot write " + out_path);
}

void emit_pair(const PairFile& pf, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    write_pair(pf, out);
  else
    write_pair_file(pf, out_path);
}

std::size_t default_copies(double alpha, std::size_t requested) {
  if (requested > 0) return requested;
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::numbers::pi / alpha)));
}

std::vector<double> gauss_heights(const RotParams& p) {
  if (p.samples < 2) fail(ErrorKind::InvalidArgument, "need at least two meridian samples");
  std::vector<double> h;
  for (std::size_t i = 0; i < p.samples; ++i)
    h.push_back(-p.hmax + 2.0 * p.hmax * static_cast<double>(i) / static_cast<double>(p.samples - 1));
  return h;
}

Json rot_metadata(const char* generator, const RotParams& p, std::size_t copies) {
  Json md;
  md["generator"] = generator;
  md["samples"] = p.samples;
  md["hmax"] = p.hmax;
  md["r0"] = p.r0;
  md["alpha"] = p.alpha;
  md["copies"] = copies;
  return md;
}

PairFile pair_file(const ParallelPair& pair, Json metadata) {
  metadata["tolerance"] = pair.tol();
  return PairFile{pair.m(), pair.s(), std::move(metadata)};
}

PairFile gen_rotational(const char* generator, const RotParams& p, double value) {
  const GaussMeridian g = spherical_gauss_meridian(gauss_heights(p));
  const std::string name = generator;
  MeridianSpec ms = name == "pseudosphere" ? gen_prescribed_K(g.r_star, g.h_star, value, p.r0, 0.0)
                                           : gen_prescribed_H(g.r_star, g.h_star, {value}, p.r0, 0.0);
  const std::size_t copies = default_copies(p.alpha, p.copies);
  const ParallelPair pair = rot_surface(ms, p.alpha, copies);
  Json md = rot_metadata(generator, p, copies);
  md[name == "pseudosphere" ? "K" : "H"] = value;
  md["free_height_steps"] = ms.free_height_steps;
  return pair_file(pair, std::move(md));
}

PairFile gen_billiard(const BilliardParams& p) {
  if (p.surface != "m" && p.surface != "mt") fail(ErrorKind::InvalidArgument, "--surface must be m or mt");
  const Ellipse e(p.a, p.b);
  const BilliardTrajectory t = billiard_trajectory(e, ConfocalMode{p.a_prime, p.start, p.bounces});
  const RolledTraces traces = roll_to_line(t, e);
  const std::size_t copies = default_copies(p.alpha, p.copies);
  const DelaunayPair dp = delaunay_pair(traces, p.alpha, copies);
  Json md;
  md["generator"] = "delaunay-billiard";
  md["a"] = p.a;
  md["b"] = p.b;
  md["aprime"] = p.a_prime;
  md["bounces"] = p.bounces;
  md["alpha"] = p.alpha;
  md["copies"] = copies;
  md["start"] = p.start;
  md["surface"] = p.surface;
  md["l"] = dp.report.l;
  return pair_file(p.surface == "m" ? dp.m : dp.mt, std::move(md));
}

std::string fixed6(const Json& v) {
  if (v.is_null()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
  return buf;
}

void print_human(const Json& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%6s %14s %14s %14s %14s %14s  %s\n", "face", "H", "K", "kappa1", "kappa2", "A_m",
                "status");
  out << line;
  for (const auto& f : report["faces"]) {
    std::snprintf(line, sizeof line, "%6llu %14s %14s %14s %14s %14s  %s\n",
                  static_cast<unsigned long long>(f["face"].get<std::size_t>()), fixed6(f["H"]).c_str(),
                  fixed6(f["K"]).c_str(), fixed6(f["kappa1"]).c_str(), fixed6(f["kappa2"]).c_str(),
                  fixed6(f["A_m"]).c_str(), f["status"].get<std::string>().c_str());
    out << line;
  }
  const Json& s = report["summary"];
  out << "H: min " << fixed6(s["H"]["min"]) << "  max " << fixed6(s["H"]["max"]) << "  mean " << fixed6(s["H"]["mean"])
      << '\n';
  out << "K: min " << fixed6(s["K"]["min"]) << "  max " << fixed6(s["K"]["max"]) << "  mean " << fixed6(s["K"]["mean"])
      << '\n';
  out << "undefined faces: " << s["undefined_faces"].get<std::size_t>() << '\n';
}

int cmd_curvature(const std::string& path, const std::string& out_path, bool human, std::ostream& out) {
  const ParallelPair pair = load_pair(path);
  const Json report = curvature_report(pair);
  if (human)
    print_human(report, out);
  else
    emit(report, out_path, out);
  if (human && !out_path.empty()) emit(report, out_path, out);
  return report["summary"]["undefined_faces"].get<std::size_t>() == 0 ? 0 : 1;
}

int cmd_check(const std::string& path, const std::string& kind, const std::string& with, std::optional<double> tol,
              std::ostream& out) {
  std::optional<Mesh> s;
  std::optional<Mesh> m;
  if (is_pair_path(path)) {
    PairFile pf = read_pair_file(path);
    m = std::move(pf.m);
    s = std::move(pf.s);
  } else {
    m = load_mesh(path);
  }
  if (!with.empty()) s = is_pair_path(with) ? read_pair_file(with).s : load_mesh(with);

  Json doc;
  doc["check"] = kind;
  bool pass = false;
  if (kind == "parallel") {
    if (!s) fail(ErrorKind::InvalidArgument, "--kind parallel needs a pair file or --with <gauss mesh>");
    if (!same_combinatorics(*m, *s)) fail(ErrorKind::CombinatoricsMismatch, "meshes differ in combinatorics");
    const double t = tol.value_or(default_tolerance(*m));
    const ParallelCheck pc = check_parallel(*m, *s, t);
    pass = pc.pass;
    doc["tolerance"] = t;
    doc["max_deviation"] = pc.max_deviation;
    doc["worst_edge"] = pc.worst_edge ? Json(*pc.worst_edge) : Json(nullptr);
    doc["first_failing_edge"] = pc.first_failing_edge ? Json(*pc.first_failing_edge) : Json(nullptr);
  } else if (kind == "planar") {
    const double t = tol.value_or(default_tolerance(*m));
    const PlanarityReport pr = face_planarity(*m, t);
    pass = pr.pass;
    doc["tolerance"] = t;
    doc["max_residual"] = pr.max_residual;
    doc["first_failing_face"] = pr.first_failing_face ? Json(*pr.first_failing_face) : Json(nullptr);
  } else if (kind == "circular") {
    const double t = tol.value_or(default_tolerance(*m));
    const CircularityReport cr = is_circular(*m, t);
    pass = cr.pass;
    doc["tolerance"] = t;
    doc["max_residual"] = cr.max_residual;
  } else if (kind == "conical") {
    const double t = tol.value_or(default_tolerance(*m));
    doc["tolerance"] = t;
    try {
      const ConicalGaussImage g = canonical_gauss_conical(*m, t);
      pass = true;
      doc["concurrency_residual"] = g.concurrency_residual;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotConical) throw;
      doc["reason"] = e.what();
    }
  } else if (kind == "koenigs") {
    const double t = tol.value_or(1e-9);
    const KoenigsCheck kc = is_koenigs(*m, t);
    pass = kc.koenigs;
    doc["tolerance"] = t;
    doc["residual"] = kc.residual;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown check kind " + kind);
  }
  doc["pass"] = pass;
  out << dump_json(doc) << '\n';
  return pass ? 0 : 1;
}

int cmd_dual(const std::string& path, Index seed_edge, double seed_scale, double tol, const std::string& out_path,
             std::ostream& out) {
  const Mesh m = is_pair_path(path) ? read_pair_file(path).m : load_mesh(path);
  const KoenigsSolve ks = solve_christoffel_dual(m, DualSeed{seed_edge, seed_scale});
  Json md;
  md["generator"] = "christoffel-dual";
  md["seed_edge"] = seed_edge;
  md["seed_scale"] = seed_scale;
  md["closure_residual"] = ks.closure_residual;
  md["tolerance"] = tol;
  if (ks.closure_residual > tol) {
    Json doc;
    doc["pass"] = false;
    doc["closure_residual"] = ks.closure_residual;
    doc["tolerance"] = tol;
    out << dump_json(doc) << '\n';
    return 1;
  }
  emit_pair(PairFile{m, ks.dual, std::move(md)}, out_path, out);
  return 0;
}

int cmd_offset(const std::string& path, double t, const std::string& out_path, std::ostream& out) {
  PairFile pf = read_pair_file(path);
  const ParallelPair pair(pf.m, pf.s);
  const ParallelPair shifted = offset_pair(pair, t);
  Json md = pf.metadata;
  md["offset_t"] = t;
  emit_pair(PairFile{shifted.m(), shifted.s(), std::move(md)}, out_path, out);
  return 0;
}

int cmd_classify(const std::string& path, std::optional<double> tol, std::ostream& out) {
  const ParallelPair pair = load_pair(path);
  const double t = tol.value_or(pair.tol());
  const OffsetClassification oc = classify_offset_type(pair, t);
  Json doc;
  doc["tolerance"] = t;
  doc["vertex"] = oc.vertex;
  doc["edge"] = oc.edge;
  doc["face"] = oc.face;
  doc["vertex_residual"] = oc.vertex_residual;
  doc["edge_residual"] = oc.edge_residual;
  doc["face_residual"] = oc.face_residual;
  out << dump_json(doc) << '\n';
  return oc.none() ? 1 : 0;
}

void add_rot_options(CLI::App* app, RotParams& p) {
  app->add_option("--n", p.samples, "Meridian samples");
  app->add_option("--hmax", p.hmax, "Gauss meridian heights span [-hmax, hmax]");
  app->add_option("--r0", p.r0, "Initial meridian radius");
  app->add_option("--alpha", p.alpha, "Half rotation angle between meridians");
  app->add_option("--copies", p.copies, "Meridian copies (default round(pi/alpha))");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvatures of parallel polyhedral meshes", "mixcurv"};
  app.require_subcommand(1);

  std::string input, out_path, kind, with;
  bool human = false;
  double t = 0.0, seed_scale = 1.0, dual_tol = 1e-9, h_value = 0.25, k_value = 1.0;
  Index seed_edge = 0;
  std::optional<double> tol;
  RotParams cat_p, pseudo_p, cmc_p;
  BilliardParams bil_p;

  auto* curv = app.add_subcommand("curvature", "Per-face and per-edge curvature report of a pair file");
  curv->add_option("pair", input, "Pair file")->required();
  curv->add_option("--out", out_path, "Write the report here");
  curv->add_flag("--human", human, "Print a 6-digit table");

  auto* check = app.add_subcommand("check", "Structural checks of a mesh");
  check->add_option("mesh", input, "Mesh (.obj, .off) or pair file (.json)")->required();
  check->add_option("--kind", kind, "Check to run")
      ->required()
      ->check(CLI::IsMember({"parallel", "circular", "conical", "koenigs", "planar"}));
  check->add_option("--with", with, "Gauss mesh for --kind parallel");
  check->add_option("--tol", tol, "Absolute tolerance");

  auto* dual = app.add_subcommand("dual", "Christoffel dual of a quad mesh");
  dual->add_option("mesh", input, "Quad mesh")->required();
  dual->add_option("--seed-edge", seed_edge, "Edge whose dual scale is fixed");
  dual->add_option("--seed-scale", seed_scale, "Scale of the seed edge");
  dual->add_option("--tol", dual_tol, "Closure tolerance");
  dual->add_option("--out", out_path, "Write the pair (m, m*) here");

  auto* off = app.add_subcommand("offset", "Offset m + t s of a pair file");
  off->add_option("pair", input, "Pair file")->required();
  off->add_option("--t", t, "Offset distance")->required();
  off->add_option("--out", out_path, "Write the offset pair here");

  auto* cls = app.add_subcommand("classify-offset", "Vertex, edge and face offset properties of a pair");
  cls->add_option("pair", input, "Pair file")->required();
  cls->add_option("--tol", tol, "Absolute tolerance");

  auto* gen = app.add_subcommand("gen", "Generate a pair file");
  gen->require_subcommand(1);
  gen->add_option("--out", out_path, "Write the pair here");
  auto* cat = gen->add_subcommand("catenoid", "Rotational surface with H = 0");
  add_rot_options(cat, cat_p);
  auto* pseudo = gen->add_subcommand("pseudosphere", "Rotational surface with constant K");
  add_rot_options(pseudo, pseudo_p);
  pseudo->add_option("--K", k_value, "Gaussian curvature");
  auto* cmc = gen->add_subcommand("cmc-rot", "Rotational surface with constant H");
  add_rot_options(cmc, cmc_p);
  cmc->add_option("--H", h_value, "Mean curvature");
  auto* bil = gen->add_subcommand("delaunay-billiard", "Rotational cmc surface from a confocal billiard");
  bil->add_option("--a", bil_p.a, "Caustic semi-major axis");
  bil->add_option("--b", bil_p.b, "Caustic semi-minor axis");
  bil->add_option("--aprime", bil_p.a_prime, "Billiard table semi-major axis");
  bil->add_option("--n", bil_p.bounces, "Bounces");
  bil->add_option("--alpha", bil_p.alpha, "Half rotation angle between meridians");
  bil->add_option("--copies", bil_p.copies, "Meridian copies (default round(pi/alpha))");
  bil->add_option("--start", bil_p.start, "Start parameter on the table");
  bil->add_option("--surface", bil_p.surface, "m or mt");
  for (auto* sub : {cat, pseudo, cmc, bil}) sub->add_option("--out", out_path, "Write the pair here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mixcurv: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*curv) return cmd_curvature(input, out_path, human, out);
    if (*check) return cmd_check(input, kind, with, tol, out);
    if (*dual) return cmd_dual(input, seed_edge, seed_scale, dual_tol, out_path, out);
    if (*off) return cmd_offset(input, t, out_path, out);
    if (*cls) return cmd_classify(input, tol, out);
    if (*gen) {
      PairFile pf = *cat      ? gen_rotational("catenoid", cat_p, 0.0)
                    : *pseudo ? gen_rotational("pseudosphere", pseudo_p, k_value)
                    : *cmc    ? gen_rotational("cmc-rot", cmc_p, h_value)
                              : gen_billiard(bil_p);
      emit_pair(pf, out_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "mixcurv: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "mixcurv: " << e.what() << '\n';
    return 2;
  }
  err << "mixcurv: no command\n";
  return 2;
}

}  // namespace mixcurv
