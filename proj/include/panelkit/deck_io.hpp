#pragma once

// Legacy solver input formats: 10-column numeric fields, LaWGS wireframe
// geometry, the keyword auxiliary file, and the combined a502 deck.
//
// LaWGS (canonical form written here):
//   'title'
//   'network name'                     one block per network
//   1 nrows ncols isym 0 0 0 0 0 0 1 1 1 0
//   x y z x y z ...                    6 ten-column fields per line, row-major
// The parser also accepts whitespace-separated free-format numbers.
//
// Auxiliary file: KEY=value lines, written in this order:
//   TITLE, MACH, ALPHA (space separated), BETA, SREF, SPAN, CBAR, XREF, YREF,
//   ZREF, SYMM (only when on), BOUN=<network> <code> (one per network),
//   WAKE=<wake> <upper> <lower> <length in chords> <dx> <dy> <dz>, LAWGS=<file>,
//   then any unknown keys in the order they were read.
//
// a502 deck: cards start with '$' (TITLE, FORCED, FLOW, NETWORK, WAKE, END);
// numeric records hold at most 6 ten-column fields.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "panelkit/abutment.hpp"
#include "panelkit/geometry.hpp"

namespace panelkit {

/// Exactly 10 characters. Five significant digits as "sd.ddddEse" when the
/// exponent has one digit; " d.dddE+ee" when the fifth digit is zero or the
/// exponent needs two digits. Throws FieldOverflow for |x| >= 1e100 or
/// non-finite x.
std::string format_field10(double x);
/// Fortran-style read of one field: blanks mean zero. Throws ParseError.
double parse_field10(const std::string& field);

/// Values packed six to a line.
std::string format_records(const std::vector<double>& values);

struct FlowConditions {
  double mach = 0.0;
  std::vector<double> alphas;  ///< degrees
  double beta = 0.0;           ///< degrees
  double sref = 1.0;
  double span = 1.0;
  double cbar = 1.0;
  double xref = 0.0, yref = 0.0, zref = 0.0;
  bool symmetry = false;

  /// Throws InvalidFlowConditions.
  void validate() const;
  friend bool operator==(const FlowConditions&, const FlowConditions&) = default;
};

/// Boundary-condition class codes. Only 1 and 18 are produced by the pipeline.
enum class BcCode { Impermeable = 1, SuperInclined = 2, Inlet = 3, FanFace = 4, Wake = 18 };
BcCode bc_code_for(const StructuredNetwork& net);

struct LawgsNetwork {
  std::string name;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  int isym = 0;
  std::vector<Point3> points;

  friend bool operator==(const LawgsNetwork&, const LawgsNetwork&) = default;
};

struct LawgsObject {
  std::string title;
  std::vector<LawgsNetwork> networks;

  friend bool operator==(const LawgsObject&, const LawgsObject&) = default;
};

LawgsObject to_lawgs(const std::string& title, const std::vector<StructuredNetwork>& networks, bool symmetry);
std::string write_lawgs(const LawgsObject& obj);
/// Throws MalformedLawgs (with a line number) or GridSizeMismatch.
LawgsObject parse_lawgs(const std::string& text);

struct BoundarySpec {
  std::string network;
  BcCode code = BcCode::Impermeable;
  friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

struct WakeSpec {
  std::string wake;
  std::string upper;
  std::string lower;
  double length_chords = 20.0;
  Vec3 direction{1.0, 0.0, 0.0};
  friend bool operator==(const WakeSpec&, const WakeSpec&) = default;
};

struct AuxDeck {
  std::string title;
  FlowConditions flow;
  std::vector<BoundarySpec> boundaries;
  std::vector<WakeSpec> wakes;
  std::string lawgs_file;
  std::vector<std::pair<std::string, std::string>> extra;  ///< unknown keys, verbatim

  friend bool operator==(const AuxDeck&, const AuxDeck&) = default;
};

/// Validates the flow conditions before writing anything.
std::string write_aux(const AuxDeck& aux);
/// Throws MalformedAux (with a line number) or InvalidFlowConditions.
AuxDeck parse_aux(const std::string& text);

struct DeckBlock {
  std::string card;                ///< header line without the leading '$'
  std::vector<std::string> text;   ///< free text lines (title, watermark)
  std::vector<double> values;      ///< numeric records
  friend bool operator==(const DeckBlock&, const DeckBlock&) = default;
};

struct A502Deck {
  std::vector<DeckBlock> blocks;
  friend bool operator==(const A502Deck&, const A502Deck&) = default;
};

struct AssembleOptions {
  /// When set, the deck is refused unless the report passes.
  const AbutmentReport* abutment = nullptr;
  /// Emit anyway with a watermark block when the abutment gate fails.
  bool force = false;
};

/// Throws UnresolvedAbutment, MissingBoundaryCondition or
/// InvalidFlowConditions.
A502Deck assemble_a502(const LawgsObject& geometry, const AuxDeck& aux, const AssembleOptions& options = {});
std::string write_a502(const A502Deck& deck);
/// Throws MalformedDeck (with a line number) or ParseError.
A502Deck parse_a502(const std::string& text);

/// Panels of all non-wake networks, from the network dimensions in the deck.
std::size_t deck_panel_count(const A502Deck& deck);

/// Shortest decimal form that reads back to the same double.
std::string shortest(double x);

}  // namespace panelkit
