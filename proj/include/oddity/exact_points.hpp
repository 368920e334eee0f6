#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oddity {

using BigInt = boost::multiprecision::cpp_int;
/// Always stored reduced with a positive denominator.
using ExactRational = boost::multiprecision::cpp_rational;

/// Gamma(2/3) to 40 significant digits.
inline constexpr long double kGammaTwoThirds = 1.354117939426400416945288028154513785519L;

/// Natural log of a positive big integer or rational without overflow.
double log_of(const BigInt& value);
double log_of(const ExactRational& value);

BigInt factorial(int n);

/// Number of N x N alternating sign matrices, prod_{j<N} (3j+1)!/(N+j)!.
/// Throws InvariantError if the product of ratios is not an integer.
BigInt asm_count(int order);

/// Razumov-Stroganov maximal probability on the odd ring L = 2N+1 at
/// delta = 1/2: [3^{N/2} 2^{-N} prod_{j=1}^N (3j-1)/(2j-1)]^{-2}. Squaring
/// removes the half-integer power of 3, so the value is rational.
ExactRational rs_pmax(int minority);
double rs_log_pmax(int minority);

/// Normalisation N_N of the odd ground state when psi_{1..N} = 1, squared:
/// 3^N (prod (3j-1))^2 A(N)^2 / (4^N (prod (2j-1))^2).
ExactRational rs_norm_squared(int minority);

/// Large-L min-entropy at delta = 1/2:
/// L log(3 sqrt3 / 4) + (1/3) log(L/2) + log(4 pi / (3 sqrt3 Gamma(2/3)^2)).
double rs_asymptotic_entropy(int odd_sites);
double rs_linear_coefficient();
inline constexpr double kRsLogCoefficient = 1.0 / 3.0;

/// Discrete Coulomb gas parameters tied to the iMPS exponent.
struct CoulombParams {
  double beta = 0.0;
  double alpha = 0.0;
  double delta = 0.0;

  static CoulombParams from_alpha(double alpha);
  static CoulombParams from_beta(double beta);
};

/// Closed-form Q_beta(L, N) for beta in {2, 4}. DomainError otherwise.
ExactRational coulomb_q(int beta, int sites, int particles);

/// Q_beta(L, N) by summing Boltzmann weights over every position set.
/// With use_translation_orbits the sum runs over sets containing site 1 and is
/// rescaled by L / N. SizingError beyond `cap` position sets.
double coulomb_q_bruteforce(double beta, int sites, int particles,
                            bool use_translation_orbits = false, double cap = 1e7);

/// x = Z_alpha(2N+1, N) / Z_alpha(2N, N). Closed form ((2N+1)/(2N))^N for
/// alpha in {1/4, 1/2}; brute-force enumeration otherwise (small N only).
double z_ratio(double alpha, int particles);

/// Exact rational x for alpha in {1/4, 1/2}, built from the closed forms of Q.
ExactRational z_ratio_exact(double alpha, int particles);

/// x by enumeration for any alpha.
double z_ratio_bruteforce(double alpha, int particles);

struct CoulombRow {
  int beta = 0;
  int sites = 0;
  int particles = 0;
  double exact = 0.0;
  double bruteforce = 0.0;
  double rel_err = 0.0;
};

/// Closed form against enumeration for beta in {2, 4}, all 1 <= N < L,
/// L in [min_sites, max_sites].
std::vector<CoulombRow> coulomb_table(int min_sites, int max_sites);

}  // namespace oddity
