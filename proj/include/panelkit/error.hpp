#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace panelkit {

/// Every failure the toolchain reports falls into one of these categories.
enum class ErrorKind {
  DegeneratePanel,
  InvalidNetwork,
  MalformedMesh,
  UnsupportedMeshVersion,
  AmbiguousStations,
  EmptyComponent,
  OpenSectionLoop,
  NonMatchingSectionCounts,
  AsymmetricGeometry,
  MissingTrailingEdge,
  InsufficientPoints,
  IllConditionedFit,
  CountMismatch,
  GapTooLarge,
  InvalidFlowConditions,
  FieldOverflow,
  ParseError,
  MalformedLawgs,
  GridSizeMismatch,
  MalformedAux,
  MalformedDeck,
  UnresolvedAbutment,
  MissingBoundaryCondition,
  SingularMatrix,
  InvalidModel,
  OutOfValidityRange,
  MalformedAgps,
  MalformedFfmf,
  UnknownCase,
  ConfigError,
  ExternalSolverFailure,
  Timeout,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace panelkit
