#include "panelkit/error.hpp"

namespace panelkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegeneratePanel: return "DegeneratePanel";
    case ErrorKind::InvalidNetwork: return "InvalidNetwork";
    case ErrorKind::MalformedMesh: return "MalformedMesh";
    case ErrorKind::UnsupportedMeshVersion: return "UnsupportedMeshVersion";
    case ErrorKind::AmbiguousStations: return "AmbiguousStations";
    case ErrorKind::EmptyComponent: return "EmptyComponent";
    case ErrorKind::OpenSectionLoop: return "OpenSectionLoop";
    case ErrorKind::NonMatchingSectionCounts: return "NonMatchingSectionCounts";
    case ErrorKind::AsymmetricGeometry: return "AsymmetricGeometry";
    case ErrorKind::MissingTrailingEdge: return "MissingTrailingEdge";
    case ErrorKind::InsufficientPoints: return "InsufficientPoints";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::GapTooLarge: return "GapTooLarge";
    case ErrorKind::InvalidFlowConditions: return "InvalidFlowConditions";
    case ErrorKind::FieldOverflow: return "FieldOverflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MalformedLawgs: return "MalformedLawgs";
    case ErrorKind::GridSizeMismatch: return "GridSizeMismatch";
    case ErrorKind::MalformedAux: return "MalformedAux";
    case ErrorKind::MalformedDeck: return "MalformedDeck";
    case ErrorKind::UnresolvedAbutment: return "UnresolvedAbutment";
    case ErrorKind::MissingBoundaryCondition: return "MissingBoundaryCondition";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::OutOfValidityRange: return "OutOfValidityRange";
    case ErrorKind::MalformedAgps: return "MalformedAgps";
    case ErrorKind::MalformedFfmf: return "MalformedFfmf";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ExternalSolverFailure: return "ExternalSolverFailure";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace panelkit
