#include "mixcurv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "mixcurv/curvature.hpp"
#include "mixcurv/error.hpp"

namespace mixcurv {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    parse_fail(line, "invalid number '" + std::string(tok) + "'");
  return v;
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_fail(line, "invalid index '" + std::string(tok) + "'");
  return v;
}

Mesh assemble(std::vector<Vec3> verts, std::vector<std::vector<Index>> faces) {
  try {
    auto comb = build_combinatorics(verts.size(), std::move(faces));
    return Mesh(std::move(comb), std::move(verts));
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, std::string("invalid mesh: ") + e.what());
  }
}

bool is_unsupported_obj(std::string_view key) {
  static constexpr std::string_view keys[] = {"l", "p", "vp", "curv", "curv2", "surf", "cstype", "deg",
                                              "bmat", "step", "parm", "trim", "hole", "scrv", "sp", "end", "con"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

bool is_ignored_obj(std::string_view key) {
  static constexpr std::string_view keys[] = {"vn", "vt", "o", "g", "s", "usemtl", "mtllib", "mg",
                                              "lod", "shadow_obj", "trace_obj", "bevel", "c_interp",
                                              "d_interp", "usemap", "maplib"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

Mesh parse_obj(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<std::vector<long long>> raw_faces;
  std::vector<std::size_t> face_lines;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto toks = split(strip_comment(text));
    if (toks.empty()) continue;
    const std::string_view key = toks[0];
    if (key == "v") {
      if (toks.size() < 4) parse_fail(line, "vertex needs three coordinates");
      verts.emplace_back(parse_double(toks[1], line), parse_double(toks[2], line), parse_double(toks[3], line));
    } else if (key == "f") {
      if (toks.size() < 4) parse_fail(line, "face needs at least three vertices");
      std::vector<long long> face;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        const std::string_view ref = toks[k].substr(0, toks[k].find('/'));
        long long idx = parse_int(ref, line);
        if (idx == 0) parse_fail(line, "index 0 is not valid in OBJ");
        if (idx < 0) {
          idx += static_cast<long long>(verts.size());
          if (idx < 0) parse_fail(line, "relative index before the first vertex");
        } else {
          idx -= 1;
        }
        face.push_back(idx);
      }
      raw_faces.push_back(std::move(face));
      face_lines.push_back(line);
    } else if (is_unsupported_obj(key)) {
      fail(ErrorKind::UnsupportedElement, "line " + std::to_string(line) + ": element '" + std::string(key) + "'");
    } else if (!is_ignored_obj(key)) {
      fail(ErrorKind::UnsupportedElement, "line " + std::to_string(line) + ": unknown record '" + std::string(key) + "'");
    }
  }
  std::vector<std::vector<Index>> faces;
  for (std::size_t f = 0; f < raw_faces.size(); ++f) {
    std::vector<Index> face;
    for (long long idx : raw_faces[f]) {
      if (idx >= static_cast<long long>(verts.size())) parse_fail(face_lines[f], "vertex index out of range");
      face.push_back(static_cast<Index>(idx));
    }
    faces.push_back(std::move(face));
  }
  return assemble(std::move(verts), std::move(faces));
}

Mesh parse_off(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
  std::vector<std::string> storage;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    storage.push_back(text);
  }
  for (std::size_t i = 0; i < storage.size(); ++i) {
    auto toks = split(strip_comment(storage[i]));
    if (!toks.empty()) rows.emplace_back(i + 1, std::move(toks));
  }
  if (rows.empty() || rows[0].second[0] != "OFF") parse_fail(rows.empty() ? 1 : rows[0].first, "missing OFF header");
  std::size_t r = 0;
  std::vector<std::string_view> counts(rows[0].second.begin() + 1, rows[0].second.end());
  std::size_t count_line = rows[0].first;
  if (counts.empty()) {
    if (rows.size() < 2) parse_fail(rows[0].first, "missing element counts");
    r = 1;
    counts = rows[1].second;
    count_line = rows[1].first;
  }
  if (counts.size() < 2) parse_fail(count_line, "expected vertex and face counts");
  const long long nv = parse_int(counts[0], count_line);
  const long long nf = parse_int(counts[1], count_line);
  if (nv < 0 || nf < 0) parse_fail(count_line, "negative element count");
  ++r;
  const std::size_t available = rows.size() - r;
  if (available != static_cast<std::size_t>(nv + nf))
    parse_fail(rows.back().first, "header declares " + std::to_string(nv) + " vertices and " + std::to_string(nf) +
                                      " faces but the file has " + std::to_string(available) + " element lines");
  std::vector<Vec3> verts;
  for (long long v = 0; v < nv; ++v, ++r) {
    const auto& [ln, toks] = rows[r];
    if (toks.size() < 3) parse_fail(ln, "vertex needs three coordinates");
    verts.emplace_back(parse_double(toks[0], ln), parse_double(toks[1], ln), parse_double(toks[2], ln));
  }
  std::vector<std::vector<Index>> faces;
  for (long long f = 0; f < nf; ++f, ++r) {
    const auto& [ln, toks] = rows[r];
    const long long k = parse_int(toks[0], ln);
    if (k < 3 || static_cast<long long>(toks.size()) < k + 1) parse_fail(ln, "face needs a count and that many indices");
    std::vector<Index> face;
    for (long long i = 1; i <= k; ++i) {
      const long long idx = parse_int(toks[static_cast<std::size_t>(i)], ln);
      if (idx < 0 || idx >= nv) parse_fail(ln, "vertex index out of range");
      face.push_back(static_cast<Index>(idx));
    }
    faces.push_back(std::move(face));
  }
  return assemble(std::move(verts), std::move(faces));
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

Json points_json(const Mesh& m) {
  Json arr = Json::array();
  for (const auto& p : m.positions()) arr.push_back(Json::array({p.x(), p.y(), p.z()}));
  return arr;
}

std::vector<Vec3> points_from_json(const Json& arr, const char* key) {
  if (!arr.is_array()) fail(ErrorKind::ParseError, std::string(key) + " must be an array");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& p = arr[i];
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
      fail(ErrorKind::ParseError, std::string(key) + "[" + std::to_string(i) + "] must be three numbers");
    out.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  }
  return out;
}

void dump(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::null: out += "null"; return;
    case Json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
    case Json::value_t::number_integer: out += std::to_string(v.get<std::int64_t>()); return;
    case Json::value_t::number_unsigned: out += std::to_string(v.get<std::uint64_t>()); return;
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_number(d) : "null";
      return;
    }
    case Json::value_t::string: out += v.dump(); return;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump(v[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += inner;
        dump(v[i], out, indent + 1);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += inner + Json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + "}";
      return;
    }
    default: out += "null"; return;
  }
}

Json stats(const std::vector<double>& values) {
  if (values.empty()) return Json{{"min", nullptr}, {"max", nullptr}, {"mean", nullptr}};
  double sum = 0.0;
  for (double x : values) sum += x;
  return Json{{"min", *std::min_element(values.begin(), values.end())},
              {"max", *std::max_element(values.begin(), values.end())},
              {"mean", sum / static_cast<double>(values.size())}};
}

bool nearly_constant(const std::vector<double>& values, double tol) {
  if (values.empty()) return false;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo <= tol * std::max({1.0, std::abs(*lo), std::abs(*hi)});
}

}  // namespace

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") return MeshFormat::obj;
  if (ext == ".off") return MeshFormat::off;
  return std::nullopt;
}

Mesh parse_mesh(std::istream& in, MeshFormat format) {
  return format == MeshFormat::obj ? parse_obj(in) : parse_off(in);
}

Mesh parse_mesh(const std::filesystem::path& path, MeshFormat format) {
  auto in = open_in(path);
  return parse_mesh(in, format);
}

void write_mesh(const Mesh& mesh, std::ostream& out, MeshFormat format) {
  const auto& faces = mesh.combinatorics().faces();
  if (format == MeshFormat::off) {
    out << "OFF\n" << mesh.vertex_count() << ' ' << faces.size() << ' ' << mesh.combinatorics().edge_count() << '\n';
    for (const auto& p : mesh.positions())
      out << format_number(p.x()) << ' ' << format_number(p.y()) << ' ' << format_number(p.z()) << '\n';
    for (const auto& f : faces) {
      out << f.size();
      for (Index v : f) out << ' ' << v;
      out << '\n';
    }
  } else {
    for (const auto& p : mesh.positions())
      out << "v " << format_number(p.x()) << ' ' << format_number(p.y()) << ' ' << format_number(p.z()) << '\n';
    for (const auto& f : faces) {
      out << 'f';
      for (Index v : f) out << ' ' << v + 1;
      out << '\n';
    }
  }
  if (!out) fail(ErrorKind::IoError, "mesh output failed");
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  auto out = open_out(path);
  write_mesh(mesh, out, format);
  out.close();
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
}

PairFile parse_pair(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    parse_fail(line, "malformed JSON");
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, "pair file must be a JSON object");
  if (doc.value("format", std::string()) != "parallel-pair")
    fail(ErrorKind::ParseError, "format must be \"parallel-pair\"");
  for (const char* key : {"vertices_m", "vertices_s", "faces"})
    if (!doc.contains(key)) fail(ErrorKind::ParseError, std::string("missing ") + key);
  std::vector<Vec3> vm = points_from_json(doc["vertices_m"], "vertices_m");
  std::vector<Vec3> vs = points_from_json(doc["vertices_s"], "vertices_s");
  if (vm.size() != vs.size())
    fail(ErrorKind::ParseError, "vertices_m has " + std::to_string(vm.size()) + " entries, vertices_s has " +
                                    std::to_string(vs.size()));
  const Json& jf = doc["faces"];
  if (!jf.is_array()) fail(ErrorKind::ParseError, "faces must be an array");
  std::vector<std::vector<Index>> faces;
  for (std::size_t f = 0; f < jf.size(); ++f) {
    if (!jf[f].is_array()) fail(ErrorKind::ParseError, "faces[" + std::to_string(f) + "] must be an array");
    std::vector<Index> face;
    for (const auto& idx : jf[f]) {
      if (!idx.is_number_integer() || idx.get<long long>() < 0 || idx.get<long long>() >= static_cast<long long>(vm.size()))
        fail(ErrorKind::ParseError, "faces[" + std::to_string(f) + "] has an invalid vertex index");
      face.push_back(idx.get<Index>());
    }
    faces.push_back(std::move(face));
  }
  std::shared_ptr<const MeshCombinatorics> comb;
  try {
    comb = build_combinatorics(vm.size(), std::move(faces));
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, std::string("invalid faces: ") + e.what());
  }
  PairFile out{Mesh(comb, std::move(vm)), Mesh(comb, std::move(vs)), Json::object()};
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail(ErrorKind::ParseError, "metadata must be an object");
    out.metadata = doc["metadata"];
  }
  return out;
}

PairFile read_pair_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_pair(in);
}

void write_pair(const PairFile& pair, std::ostream& out) {
  if (!same_combinatorics(pair.m, pair.s)) fail(ErrorKind::CombinatoricsMismatch, "pair meshes differ in combinatorics");
  Json doc;
  doc["format"] = "parallel-pair";
  doc["version"] = 1;
  doc["vertices_m"] = points_json(pair.m);
  doc["vertices_s"] = points_json(pair.s);
  doc["faces"] = pair.m.combinatorics().faces();
  doc["metadata"] = pair.metadata;
  out << dump_json(doc) << '\n';
  if (!out) fail(ErrorKind::IoError, "pair output failed");
}

void write_pair_file(const PairFile& pair, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_pair(pair, out);
  out.close();
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& value) {
  std::string out;
  dump(value, out, 0);
  return out;
}

Json curvature_report(const ParallelPair& pair) {
  constexpr double flag_tol = 1e-9;
  Json faces = Json::array();
  std::vector<double> hs, ks;
  bool principal_everywhere = true;
  for (Index f = 0; f < pair.m().face_count(); ++f) {
    const FaceAreas a = face_areas(pair, f);
    Json rec;
    rec["face"] = f;
    try {
      const FaceCurvatureReport fc = face_curvatures(pair, f);
      rec["H"] = fc.H;
      rec["K"] = fc.K;
      rec["kappa1"] = fc.principal ? Json(fc.principal->kappa1) : Json(nullptr);
      rec["kappa2"] = fc.principal ? Json(fc.principal->kappa2) : Json(nullptr);
      rec["A_m"] = fc.area_m;
      rec["A_s"] = fc.area_s;
      rec["A_ms"] = fc.mixed;
      rec["similar"] = fc.similar;
      rec["planarity_residual"] = fc.planarity_residual;
      rec["status"] = "ok";
      hs.push_back(fc.H);
      ks.push_back(fc.K);
      principal_everywhere = principal_everywhere && fc.principal.has_value();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::VanishingFaceArea) throw;
      rec["H"] = nullptr;
      rec["K"] = nullptr;
      rec["kappa1"] = nullptr;
      rec["kappa2"] = nullptr;
      rec["A_m"] = a.area_m;
      rec["A_s"] = a.area_s;
      rec["A_ms"] = a.mixed;
      rec["similar"] = false;
      rec["planarity_residual"] = pair.chart(f).residual;
      rec["status"] = "curvature undefined";
      principal_everywhere = false;
    }
    faces.push_back(std::move(rec));
  }

  Json edges = Json::array();
  for (const EdgeCurvature& ec : edge_curvatures(pair)) {
    Json rec;
    rec["edge"] = ec.edge;
    rec["vertices"] = Json::array({ec.i, ec.j});
    rec["kappa"] = ec.kappa;
    rec["center"] = ec.center ? Json::array({ec.center->x(), ec.center->y(), ec.center->z()}) : Json(nullptr);
    edges.push_back(std::move(rec));
  }

  const std::size_t undefined = pair.m().face_count() - hs.size();
  const OffsetClassification oc = classify_offset_type(pair, pair.tol());
  Json flags;
  flags["all_faces_defined"] = undefined == 0;
  flags["principal_curvatures_everywhere"] = principal_everywhere;
  flags["minimal"] = !hs.empty() && undefined == 0 &&
                     std::all_of(hs.begin(), hs.end(), [](double h) { return std::abs(h) <= flag_tol; });
  flags["constant_mean_curvature"] = undefined == 0 && nearly_constant(hs, flag_tol);
  flags["constant_gaussian_curvature"] = undefined == 0 && nearly_constant(ks, flag_tol);
  flags["vertex_offset"] = oc.vertex;
  flags["edge_offset"] = oc.edge;
  flags["face_offset"] = oc.face;

  Json summary;
  summary["faces"] = pair.m().face_count();
  summary["undefined_faces"] = undefined;
  summary["H"] = stats(hs);
  summary["K"] = stats(ks);
  summary["flag_tolerance"] = flag_tol;
  summary["flags"] = std::move(flags);

  Json doc;
  doc["format"] = "curvature-report";
  doc["version"] = 1;
  doc["faces"] = std::move(faces);
  doc["edges"] = std::move(edges);
  doc["summary"] = std::move(summary);
  return doc;
}

}  // namespace mixcurv
