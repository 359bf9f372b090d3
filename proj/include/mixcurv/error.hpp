#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixcurv {

enum class ErrorKind {
  InvalidArgument,
  InvalidIndex,
  NonFinite,
  NonManifoldEdge,
  DegenerateFace,
  CombinatoricsMismatch,
  ZeroMeshEdge,
  NotParallel,
  NonPlanarFace,
  ZeroAreaFace,
  NonTransversal,
  ClosureViolation,
  NotConnected,
  NotConical,
  OrientationInconsistent,
  LengthMismatch,
  EdgesDoNotCancel,
  DegenerateBeyondTriangle,
  BothAreasZero,
  VanishingFaceArea,
  SingularDenominator,
  DegenerateOffsetFace,
  ZeroMeanCurvature,
  NotQuadMesh,
  DegenerateQuad,
  OddVertexCount,
  NoIncircle,
  DistanceNotConstant,
  ParallelityViolated,
  EqualRadii,
  NoPositiveRoot,
  NegativeRadicand,
  OutOfRange,
  TangencyLost,
  CollinearTriple,
  ReflectionAmbiguity,
  NotConcyclic,
  ParseError,
  UnsupportedElement,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; kind() is stable,
// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace mixcurv
