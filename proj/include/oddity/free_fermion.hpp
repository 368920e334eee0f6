#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "oddity/basis.hpp"

namespace oddity {

/// Natural log of a probability.
struct LogProb {
  double log_p = 0.0;
  double probability() const;
};

/// sum_{i>j} log |e^{2 pi i n_i/L} - e^{2 pi i n_j/L}| over 1-based positions.
/// Each chord is evaluated as 2|sin(pi (n_i - n_j) / L)|.
double log_chord_product(int sites, std::span<const int> positions);

/// Born probability of N free fermions (XX chain ground state) at the given
/// positions: L^{-N} prod_{i>j} |chord|^2, accumulated in log domain.
/// Valid for any L; positions are 1-based and distinct.
LogProb slater_log_probability(int sites, std::span<const int> positions);
LogProb slater_log_probability(int sites, int particles, SpinConfig positions);

/// Maximal configuration n_j = 2j - 1, j = 1..N.
std::vector<int> alternating_positions(int particles);

/// S_inf of the even XX chain, L = 2N: exactly N log 2.
double even_min_entropy(int particles);

/// Ratio matrix with det W = det(V_o^dag V_o) / det(V_e^dag V_e):
/// W_nn = 1 and W_nm = -1 / (N (1 + eps^{n-m})), eps = e^{2 pi i / (2N+1)}.
Eigen::MatrixXcd w_matrix(int particles);

/// log det W via partially pivoted complex LU. Throws InvariantError if the
/// determinant is not real and positive to 1e-9 relative, DomainError for N < 1.
double w_log_det(int particles);

/// S_inf(2N+1, N) - S_inf(2N, N) at delta = 0:
/// N log(1 + 1/(2N)) - log det W.
double xx_entropy_difference(int particles);

/// The same difference from two direct Slater evaluations.
double xx_entropy_difference_direct(int particles);

/// log |det V(L, N)|, V_nm = exp(4 pi i n m / L), via complex LU.
double vandermonde_log_abs_det(int sites, int particles);

/// Hadamard bound for V(L, N): (N/2) log N.
double hadamard_log_bound(int particles);

struct XxDiffRow {
  int particles = 0;
  int odd_sites = 0;
  double entropy_difference = 0.0;
  double log_det_w = 0.0;
};

std::vector<XxDiffRow> xx_difference_table(int first, int last, int jobs = 1);

}  // namespace oddity
