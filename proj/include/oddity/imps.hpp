#pragma once

#include <vector>

#include "oddity/basis.hpp"
#include "oddity/ground_state.hpp"

namespace oddity {

/// (delta, alpha, R, K) tied together by delta = -cos(2 pi alpha),
/// R^2 = 1/(2 pi) - arccos(delta)/(2 pi^2), K = 1/(4 pi R^2), alpha = pi R^2.
struct AnsatzParams {
  double delta = 0.0;
  double alpha = 0.0;
  double radius = 0.0;
  double luttinger = 0.0;

  static AnsatzParams from_delta(double delta);
  static AnsatzParams from_alpha(double alpha);
  /// Throws InvariantError if any relation is off by more than tol.
  void check(double tol = 1e-12) const;
};

struct AnsatzWeight {
  /// 4 alpha sum_{i>j} log|chord(n_i, n_j)|
  double log_modulus = 0.0;
  /// (-1)^{sum_j n_j} over 1-based up positions.
  int marshall_sign = 1;
};

/// Modulus and Marshall sign of the iMPS amplitude at the given up spins.
/// The phase of a non-integer chord power is not evaluated: amplitudes are
/// taken real, |chord product|^{4 alpha} times the sign.
AnsatzWeight imps_log_weight(double alpha, SpinConfig positions);

/// log Z_alpha(L, N) = log sum_configs prod |chord|^{8 alpha} by enumeration
/// with a running log-sum-exp. SizingError past `cap` configurations.
double z_alpha(double alpha, int sites, int particles, double cap = 1e7);

/// log p_max of the ansatz, 4 alpha log F(L, N) - log Z_alpha(L, N), with
/// log F = N log L + log p_max at delta = 0.
double imps_log_pmax(double alpha, int sites, int particles, double cap = 1e7);

/// Normalised ansatz state on a sector basis. The Marshall sign is applied
/// only in the kPlus gauge; in kMinus the ground state is positive and the
/// ansatz is its modulus.
std::vector<double> ansatz_state(double alpha, const SectorBasis& basis, XySign sign);

/// Weight of the ansatz inside the lowest eigenspace: sum_k <psi_k|Psi>^2.
double ansatz_fidelity(double alpha, const GroundState& gs);

struct EntropyDiffTerms {
  double fermion_term = 0.0;   // -4 alpha log(p_o / p_e) at delta = 0
  double size_term = 0.0;      // -4 alpha N log(1 + 1/(2N))
  double partition_term = 0.0; // log(Z_o / Z_e)
  double total = 0.0;
};

/// Three-term split of S_inf(2N+1, N) - S_inf(2N, N) for the ansatz.
EntropyDiffTerms entropy_diff_decomposition(double alpha, int particles, double cap = 1e7);

/// The same difference taken straight from imps_log_pmax on both sizes.
double imps_entropy_difference(double alpha, int particles, double cap = 1e7);

/// Ansatz S_inf on the odd ring L = 2N+1 with N up spins.
double imps_min_entropy(double alpha, int sites, double cap = 1e7);

}  // namespace oddity
