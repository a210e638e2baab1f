#pragma once

// End-to-end orchestration: mesh -> networks -> decks -> raw solver output ->
// visualization artifacts. Stage artifacts live under
//   <outdir>/01_mesh      mesh.msh (half model when symmetric)
//   <outdir>/02_networks  networks.json, abutment.txt/.json, orientation.txt
//   <outdir>/03_decks     model.wgs, model.aux, a502.in
//   <outdir>/04_raw       model.agps, model.ffmf, model.ffm
//   <outdir>/05_post      model.dat, model.mcr, polar.csv, viscous.txt
// and <outdir>/manifest.json records a SHA-256 for every artifact.
//
// Config is JSON; relative paths resolve against the config file's
// directory. See README.md for the keys.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "panelkit/abutment.hpp"
#include "panelkit/deck_io.hpp"
#include "panelkit/external_solver.hpp"
#include "panelkit/mesh.hpp"
#include "panelkit/network_builder.hpp"
#include "panelkit/panel_solver.hpp"
#include "panelkit/viscous.hpp"

namespace panelkit {

enum class ComponentType { Fuselage, Wing, HTail };

struct ComponentConfig {
  std::string name;
  ComponentType type = ComponentType::Fuselage;
  Axis axis = Axis::X;
  RingMode ring = RingMode::Auto;  ///< fuselage only
  bool wake = true;                ///< lifting surfaces only
};

enum class Backend { Embedded, External };

enum class WeldPolicy { Off, Midpoint, OneSided };

struct PipelineConfig {
  std::filesystem::path mesh;
  std::filesystem::path output_dir;
  std::string title = "panelkit model";
  std::vector<ComponentConfig> components;
  FlowConditions flow;
  double station_tol = 1e-6;
  std::optional<double> abutment_tol;  ///< default 1e-4 x bounding-box diagonal
  WeldPolicy weld = WeldPolicy::Midpoint;
  std::optional<double> weld_max_gap;  ///< default: the abutment tolerance
  WakeOptions wake;
  Backend backend = Backend::Embedded;
  ExternalSolverConfig external;
  Compressibility compressibility = Compressibility::PrandtlGlauert;
  unsigned jobs = 1;
  bool force = false;
  std::vector<ComponentWettedItem> viscous_items;
  ViscousFlight viscous_flight;
  std::string viewer;  ///< command run on the macro after post; empty = off

  /// Throws ConfigError for malformed or unknown keys and missing paths.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);
  /// Checks paths and ranges; throws ConfigError or InvalidFlowConditions.
  void validate() const;
};

struct OrientationEntry {
  std::string network;
  double fraction_outward = 1.0;
  std::size_t offending = 0;
};

struct BuiltModel {
  RawMesh mesh;
  std::vector<StructuredNetwork> networks;  ///< bodies first, then wakes
  std::vector<WakeLink> wakes;
  std::vector<WakeSpec> wake_specs;
  bool symmetry = false;
  double abutment_tol = 0.0;
  std::size_t welded_points = 0;
  AbutmentReport abutment;
  std::vector<OrientationEntry> orientation;

  bool orientation_ok() const;
  std::string orientation_text() const;
};

/// Ingest, build every network, weld, and report.
BuiltModel build_model(const PipelineConfig& cfg);

std::string networks_to_json(const std::vector<StructuredNetwork>& nets);
std::vector<StructuredNetwork> networks_from_json(const std::string& text);

/// Outcome of `check`: 0 when clean, 1 on gate failure.
struct CheckOutcome {
  int exit_code = 0;
  std::string report;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg);

  CheckOutcome check();
  /// Throws UnresolvedAbutment unless the gate passes or `force` is set.
  void prep();
  /// Throws ExternalSolverFailure or Timeout for the external backend.
  void run();
  void post();
  void all();

  const PipelineConfig& config() const { return cfg_; }
  std::filesystem::path stage_dir(int stage) const;

 private:
  void write_artifact(const std::filesystem::path& p, const std::string& text);
  void update_manifest();

  PipelineConfig cfg_;
};

/// Holds <outdir>/.lock for the lifetime of the object; throws IoError when
/// another instance owns the directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

/// Hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace panelkit
