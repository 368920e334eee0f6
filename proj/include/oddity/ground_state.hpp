#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oddity/basis.hpp"
#include "oddity/hamiltonian.hpp"
#include "oddity/lanczos.hpp"

namespace oddity {

struct SolverOptions {
  XySign xy_sign = XySign::kMinus;
  /// The seed field is ignored; every solve derives its own from the sector
  /// and the anisotropy.
  LanczosOptions lanczos{};
  std::uint64_t dimension_cap = kDefaultDimensionCap;
};

/// Lowest eigenspace of the XXZ chain in one sector.
///
/// When the lowest level is degenerate (odd rings with XySign::kPlus carry a
/// momentum doublet) every vector of an orthonormal basis is kept, and
/// probabilities() is the diagonal of the eigenspace projector divided by its
/// dimension. That density is the |amplitude|^2 of each momentum eigenstate
/// and does not depend on which basis the solver returned.
struct GroundState {
  Sector sector;
  double delta = 0.0;
  XySign xy_sign = XySign::kMinus;
  double energy = 0.0;
  std::shared_ptr<const SectorBasis> basis;
  /// Orthonormal, each vector phased so its largest-magnitude entry is positive.
  std::vector<std::vector<double>> eigenspace;
  bool degenerate = false;
  double residual = 0.0;
  /// Distance to the next level; NaN if the solver could not resolve one.
  double gap = 0.0;

  const std::vector<double>& amplitudes() const { return eigenspace.front(); }
  std::vector<double> probabilities() const;
};

std::uint64_t solver_seed(const Sector& sector, double delta);

/// Basis and hopping graph of one sector, reusable across anisotropies.
class SectorSolver {
 public:
  explicit SectorSolver(const Sector& sector, std::uint64_t cap = kDefaultDimensionCap);

  const Sector& sector() const noexcept { return graph_.basis().sector(); }
  const HoppingGraph& graph() const noexcept { return graph_; }
  std::shared_ptr<const SectorBasis> basis() const noexcept { return graph_.basis_ptr(); }

  GroundState solve(double delta, const SolverOptions& options = {}) const;

 private:
  HoppingGraph graph_;
};

GroundState ground_state(const Sector& sector, double delta, const SolverOptions& options = {});

/// Ground state from dense diagonalisation; oracle for small sectors.
GroundState dense_ground_state(const Sector& sector, double delta, XySign sign,
                               double degeneracy_tolerance = 1e-8);

struct MinEntropy {
  double s_inf = 0.0;
  double p_max = 0.0;
  /// Lowest-index configuration among the ties.
  SpinConfig argmax;
  /// All configurations whose probability is within the tie tolerance
  /// (relative) of p_max, in basis order.
  std::vector<SpinConfig> ties;
};

MinEntropy min_entropy(std::span<const double> probabilities, const SectorBasis& basis,
                       double tie_tolerance = 1e-9);
MinEntropy min_entropy(const GroundState& gs, double tie_tolerance = 1e-9);

/// One row of an entropy scan. A non-empty error marks a failed point.
struct ScanRow {
  int sites = 0;
  int n_up = 0;
  double delta = 0.0;
  double energy = 0.0;
  double s_inf = 0.0;
  double p_max = 0.0;
  SpinConfig argmax;
  bool degenerate = false;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

/// Memo of scan results keyed by (L, N_up, delta, xy sign).
class ScanCache {
 public:
  virtual ~ScanCache() = default;
  virtual std::optional<ScanRow> load(const Sector& sector, double delta, XySign sign) const = 0;
  virtual void store(const ScanRow& row, XySign sign) const = 0;
};

/// Solve, take the min-entropy and require the argmax to be a Néel state.
/// Solver and invariant failures are caught and reported in ScanRow::error.
ScanRow scan_point(const SectorSolver& solver, double delta, const SolverOptions& options,
                   const ScanCache* cache = nullptr);

/// Rows in the order of `sizes`, each in its canonical sector.
std::vector<ScanRow> entropy_scan(double delta, std::span<const int> sizes,
                                  const SolverOptions& options = {},
                                  const ScanCache* cache = nullptr);

}  // namespace oddity
