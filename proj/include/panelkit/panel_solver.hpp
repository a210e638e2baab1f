#pragma once

// Embedded low-order potential-flow solver: constant-strength source and
// doublet panels, interior perturbation potential held at zero, rigid flat
// wakes whose doublet strength is the trailing-edge jump.
//
// Axes: x aft, y right, z up. Angles in degrees at the interface.

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "panelkit/deck_io.hpp"
#include "panelkit/geometry.hpp"

namespace panelkit {

/// Potential at `p` of a unit doublet on the flat triangle (a, b, c), normal
/// along (b-a) x (c-a): +1/2 just above, -1/2 just below.
double triangle_doublet(const Point3& a, const Point3& b, const Point3& c, const Point3& p);
/// Potential at `p` of a unit source on the triangle, -(1/4pi) * integral 1/r.
double triangle_source(const Point3& a, const Point3& b, const Point3& c, const Point3& p);
/// Quad versions: the quad is split along its shorter diagonal (p1-p3 on a
/// tie); zero-area halves are skipped.
std::array<std::array<Point3, 3>, 2> split_quad(const std::array<Point3, 4>& q);
double panel_doublet(const std::array<Point3, 4>& q, const Point3& p);
double panel_source(const std::array<Point3, 4>& q, const Point3& p);

/// Freestream unit vector for angle of attack and sideslip (degrees).
Vec3 freestream(double alpha_deg, double beta_deg);

struct WakeLink {
  std::string wake;
  std::string upper;
  std::string lower;
};

enum class Compressibility { None, PrandtlGlauert };

struct SolverModel {
  std::vector<StructuredNetwork> networks;  ///< bodies and wakes, any order
  std::vector<WakeLink> wakes;
  FlowConditions flow;  ///< mach, beta, references and symmetry; alphas unused
  Compressibility compressibility = Compressibility::PrandtlGlauert;
};

struct SolverOptions {
  unsigned threads = 1;  ///< assembly threads; results do not depend on it
};

struct NetworkSolution {
  std::string name;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> node_cp;   ///< n_rows * n_cols, row-major
  std::vector<double> panel_cp;  ///< (n_rows-1) * (n_cols-1)
  std::vector<double> mu;        ///< doublet strength per panel
  std::vector<double> sigma;     ///< source strength per panel
};

struct CaseResult {
  double alpha = 0.0;
  double cl = 0.0;
  double cdi_nearfield = 0.0;
  double cdi_trefftz = 0.0;
  double cm = 0.0;     ///< pitching moment about (xref, yref, zref), nose up positive
  double cy = 0.0;     ///< side force
  double croll = 0.0;  ///< rolling moment over sref * span
  double cn = 0.0;     ///< yawing moment over sref * span
  double residual = 0.0;  ///< |A mu - b|_inf / |b|_inf
  std::vector<NetworkSolution> networks;  ///< body networks only
  std::vector<std::vector<double>> wake_mu;  ///< per wake link, one value per strip
};

struct SolutionSet {
  double mach = 0.0;
  bool symmetry = false;
  std::vector<CaseResult> cases;
};

class PanelSolver {
 public:
  /// Assembles and factorizes. Throws InvalidModel or SingularMatrix.
  explicit PanelSolver(SolverModel model, SolverOptions options = {});

  CaseResult solve(double alpha_deg) const;
  /// Factorization is shared by every case.
  SolutionSet sweep(const std::vector<double>& alphas_deg) const;

  std::size_t n_panels() const { return panels_.size(); }
  /// Doublet influence with the wake folded in (the system matrix).
  const Eigen::MatrixXd& doublet_matrix() const { return A_; }
  const Eigen::MatrixXd& source_matrix() const { return B_; }
  const SolverModel& model() const { return model_; }
  double rcond() const { return rcond_; }

 private:
  struct Panel {
    std::size_t net;  // index into model_.networks
    std::size_t row, col;
    std::array<Point3, 4> corners;
    Point3 centroid;
    Point3 collocation;
    Vec3 normal;
    double area;
  };
  struct Strip {
    std::size_t link;
    std::size_t wake_net;
    std::size_t k;
    std::size_t upper_panel, lower_panel;
    double sign;
  };

  void build_panels();
  void build_wakes();
  void assemble(unsigned threads);
  void factorize();

  std::vector<double> tangential_gradient_cp(const Eigen::VectorXd& mu, const Vec3& vinf, std::size_t net_index,
                                             std::size_t first_panel) const;
  double trefftz_cdi(const std::vector<double>& strip_mu) const;

  SolverModel model_;
  std::vector<Panel> panels_;
  std::vector<std::size_t> net_first_panel_;  // per network, index of its first panel (bodies only)
  std::vector<Strip> strips_;
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
  double pg_factor_ = 1.0;
};

}  // namespace panelkit
