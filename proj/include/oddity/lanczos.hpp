#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oddity {

/// y = A x for a real symmetric A. x and y never alias.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct LanczosOptions {
  /// Target for the eigenpair residual ||A x - theta x||.
  double tolerance = 1e-10;
  /// Two eigenvalues closer than this are treated as one eigenspace.
  double degeneracy_tolerance = 1e-8;
  /// Residual to which the next level above the eigenspace is resolved. The
  /// Ritz value error scales as residual^2 / gap, so this is ample.
  double probe_tolerance = 1e-7;
  int krylov_dim = 30;
  int keep = 10;
  int max_restarts = 3000;
  int max_multiplicity = 8;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Orthonormal basis of the lowest eigenspace of A.
struct Eigenspace {
  double energy = 0.0;
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  /// Lowest eigenvalue strictly above the eigenspace; NaN when the whole
  /// space is degenerate.
  double next_value = 0.0;
  double residual = 0.0;
  long matvecs = 0;

  bool degenerate() const noexcept { return vectors.size() > 1; }
};

/// Thick-restart Lanczos with full reorthogonalisation. After the lowest pair
/// converges it is locked and a fresh deterministic random vector, kept
/// orthogonal to the locked set, probes the next level; this sees exactly
/// degenerate partners that a single Krylov sequence cannot.
/// Throws SolverError (with the last residual) when max_restarts is exceeded.
Eigenspace lowest_eigenspace(const LinearOperator& op, std::size_t dim,
                             const LanczosOptions& options = {});

/// Deterministic uniform [-1, 1) start vector, identical on every platform.
std::vector<double> seeded_vector(std::size_t dim, std::uint64_t seed);

}  // namespace oddity
