#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "mixcurv/mesh.hpp"

namespace mixcurv {

using Json = nlohmann::ordered_json;

enum class MeshFormat { obj, off };

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path);

// Throws ParseError (message starts with "line N:"), UnsupportedElement,
// IoError.
Mesh parse_mesh(std::istream& in, MeshFormat format);
Mesh parse_mesh(const std::filesystem::path& path, MeshFormat format);

void write_mesh(const Mesh& mesh, std::ostream& out, MeshFormat format);
// Throws IoError.
void write_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format);

// Both meshes of a parallel pair plus free-form metadata.
struct PairFile {
  Mesh m;
  Mesh s;
  Json metadata = Json::object();
};

// Throws ParseError, IoError. The meshes are not validated as a pair.
PairFile parse_pair(std::istream& in);
PairFile read_pair_file(const std::filesystem::path& path);
void write_pair(const PairFile& pair, std::ostream& out);
void write_pair_file(const PairFile& pair, const std::filesystem::path& path);

// "%.17g"; round-trips every finite double.
std::string format_number(double x);

// Deterministic JSON text: two-space indent, numbers via format_number,
// non-finite numbers as null, short numeric arrays on one line.
std::string dump_json(const Json& value);

// CurvatureReportFile document for a validated pair.
Json curvature_report(const ParallelPair& pair);

}  // namespace mixcurv
