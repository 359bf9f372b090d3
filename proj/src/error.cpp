#include "mixcurv/error.hpp"

namespace mixcurv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::CombinatoricsMismatch: return "CombinatoricsMismatch";
    case ErrorKind::ZeroMeshEdge: return "ZeroMeshEdge";
    case ErrorKind::NotParallel: return "NotParallel";
    case ErrorKind::NonPlanarFace: return "NonPlanarFace";
    case ErrorKind::ZeroAreaFace: return "ZeroAreaFace";
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::ClosureViolation: return "ClosureViolation";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::NotConical: return "NotConical";
    case ErrorKind::OrientationInconsistent: return "OrientationInconsistent";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EdgesDoNotCancel: return "EdgesDoNotCancel";
    case ErrorKind::DegenerateBeyondTriangle: return "DegenerateBeyondTriangle";
    case ErrorKind::BothAreasZero: return "BothAreasZero";
    case ErrorKind::VanishingFaceArea: return "VanishingFaceArea";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::DegenerateOffsetFace: return "DegenerateOffsetFace";
    case ErrorKind::ZeroMeanCurvature: return "ZeroMeanCurvature";
    case ErrorKind::NotQuadMesh: return "NotQuadMesh";
    case ErrorKind::DegenerateQuad: return "DegenerateQuad";
    case ErrorKind::OddVertexCount: return "OddVertexCount";
    case ErrorKind::NoIncircle: return "NoIncircle";
    case ErrorKind::DistanceNotConstant: return "DistanceNotConstant";
    case ErrorKind::ParallelityViolated: return "ParallelityViolated";
    case ErrorKind::EqualRadii: return "EqualRadii";
    case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::TangencyLost: return "TangencyLost";
    case ErrorKind::CollinearTriple: return "CollinearTriple";
    case ErrorKind::ReflectionAmbiguity: return "ReflectionAmbiguity";
    case ErrorKind::NotConcyclic: return "NotConcyclic";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedElement: return "UnsupportedElement";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mixcurv
