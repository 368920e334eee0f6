#include "oddity/exact_points.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oddity/basis.hpp"
#include "oddity/errors.hpp"
#include "oddity/free_fermion.hpp"

namespace oddity {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

BigInt pow_int(long base, int exponent) {
  BigInt out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Visits every N-subset of {1..L} in lexicographic order of 1-based positions.
template <typename Fn>
void for_each_subset(int sites, int particles, bool pin_first, Fn&& fn) {
  std::vector<int> pos(static_cast<std::size_t>(particles));
  for (int j = 0; j < particles; ++j) pos[static_cast<std::size_t>(j)] = j + 1;
  while (true) {
    fn(std::span<const int>(pos));
    int j = particles - 1;
    while (j >= 0 && pos[static_cast<std::size_t>(j)] == sites - particles + j + 1) --j;
    if (j < 0 || (pin_first && j == 0)) return;
    ++pos[static_cast<std::size_t>(j)];
    for (int k = j + 1; k < particles; ++k) {
      pos[static_cast<std::size_t>(k)] = pos[static_cast<std::size_t>(k - 1)] + 1;
    }
  }
}

}  // namespace

double log_of(const BigInt& value) {
  if (value <= 0) throw DomainError("log_of requires a positive value");
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 52) return std::log(value.convert_to<double>());
  const std::size_t shift = bits - 60;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

double log_of(const ExactRational& value) {
  return log_of(boost::multiprecision::numerator(value)) -
         log_of(boost::multiprecision::denominator(value));
}

BigInt factorial(int n) {
  BigInt out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt asm_count(int order) {
  if (order < 1) throw DomainError("asm_count requires N >= 1");
  BigInt num = 1;
  BigInt den = 1;
  for (int j = 0; j < order; ++j) {
    num *= factorial(3 * j + 1);
    den *= factorial(order + j);
  }
  BigInt q;
  BigInt r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) {
    throw InvariantError("alternating sign matrix product is not an integer at N=" +
                         std::to_string(order));
  }
  return q;
}

ExactRational rs_pmax(int minority) {
  if (minority < 1) throw DomainError("rs_pmax requires N >= 1");
  // bracket^2 = (3/4)^N prod ((3j-1)/(2j-1))^2
  BigInt num = pow_int(3, minority);
  BigInt den = pow_int(4, minority);
  for (int j = 1; j <= minority; ++j) {
    num *= BigInt(3 * j - 1) * (3 * j - 1);
    den *= BigInt(2 * j - 1) * (2 * j - 1);
  }
  return ExactRational(den, num);
}

double rs_log_pmax(int minority) { return log_of(rs_pmax(minority)); }

ExactRational rs_norm_squared(int minority) {
  if (minority < 1) throw DomainError("rs_norm_squared requires N >= 1");
  const BigInt a = asm_count(minority);
  BigInt num = pow_int(3, minority) * a * a;
  BigInt den = pow_int(4, minority);
  for (int j = 1; j <= minority; ++j) {
    num *= BigInt(3 * j - 1) * (3 * j - 1);
    den *= BigInt(2 * j - 1) * (2 * j - 1);
  }
  return ExactRational(num, den);
}

double rs_linear_coefficient() { return std::log(3.0 * std::numbers::sqrt3 / 4.0); }

double rs_asymptotic_entropy(int odd_sites) {
  if (odd_sites < 3 || odd_sites % 2 == 0) {
    throw DomainError("rs_asymptotic_entropy requires odd L >= 3");
  }
  const double L = odd_sites;
  const double g = static_cast<double>(kGammaTwoThirds);
  return L * rs_linear_coefficient() + kRsLogCoefficient * std::log(L / 2.0) +
         std::log(4.0 * std::numbers::pi / (3.0 * std::numbers::sqrt3 * g * g));
}

CoulombParams CoulombParams::from_alpha(double alpha) {
  return {8.0 * alpha, alpha, -std::cos(2.0 * std::numbers::pi * alpha)};
}

CoulombParams CoulombParams::from_beta(double beta) { return from_alpha(beta / 8.0); }

ExactRational coulomb_q(int beta, int sites, int particles) {
  if (particles < 0 || particles > sites || sites < 1) {
    throw DomainError("coulomb_q requires 0 <= N <= L");
  }
  if (beta == 2) return ExactRational(1);
  if (beta != 4) throw DomainError("closed form Q_beta only for beta in {2, 4}");
  // The second branch is the particle-hole image N -> L - N of the first.
  const int n = 2 * particles <= sites ? particles : sites - particles;
  const BigInt num = factorial(2 * n);
  const BigInt den = pow_int(2, n) * factorial(n) * pow_int(sites, n);
  return ExactRational(num, den);
}

double coulomb_q_bruteforce(double beta, int sites, int particles, bool use_translation_orbits,
                            double cap) {
  if (particles < 0 || particles > sites || sites < 1) {
    throw DomainError("coulomb_q_bruteforce requires 0 <= N <= L");
  }
  if (particles == 0) return 1.0;
  const double count = static_cast<double>(binomial(sites, particles));
  if (count > cap) {
    std::ostringstream msg;
    msg << "Coulomb gas enumeration of " << count << " sets exceeds the cap " << cap;
    throw SizingError(msg.str());
  }
  // log|chord| table indexed by separation.
  std::vector<double> log_chord(static_cast<std::size_t>(sites), 0.0);
  for (int d = 1; d < sites; ++d) {
    log_chord[static_cast<std::size_t>(d)] =
        std::log(2.0 * std::sin(std::numbers::pi * d / static_cast<double>(sites)));
  }
  const double shift = 0.5 * beta * particles * std::log(static_cast<double>(sites));
  double sum = 0.0;
  for_each_subset(sites, particles, use_translation_orbits, [&](std::span<const int> pos) {
    double acc = 0.0;
    for (std::size_t i = 1; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        acc += log_chord[static_cast<std::size_t>(pos[i] - pos[j])];
      }
    }
    sum += std::exp(beta * acc - shift);
  });
  if (use_translation_orbits) sum *= static_cast<double>(sites) / particles;
  return sum;
}

ExactRational z_ratio_exact(double alpha, int particles) {
  if (particles < 1) throw DomainError("z_ratio_exact requires N >= 1");
  int beta = 0;
  if (near(alpha, 0.25)) {
    beta = 2;
  } else if (near(alpha, 0.5)) {
    beta = 4;
  } else {
    throw DomainError("z_ratio_exact only for alpha in {1/4, 1/2}");
  }
  // Z_alpha(L, N) = L^{4 N alpha} Q_{8 alpha}(L, N) with 4 N alpha = N beta / 2.
  const int power = particles * beta / 2;
  const ExactRational odd =
      ExactRational(pow_int(2 * particles + 1, power)) * coulomb_q(beta, 2 * particles + 1, particles);
  const ExactRational even =
      ExactRational(pow_int(2 * particles, power)) * coulomb_q(beta, 2 * particles, particles);
  return odd / even;
}

double z_ratio_bruteforce(double alpha, int particles) {
  const double beta = 8.0 * alpha;
  const double n = particles;
  const double q_odd = coulomb_q_bruteforce(beta, 2 * particles + 1, particles);
  const double q_even = coulomb_q_bruteforce(beta, 2 * particles, particles);
  return std::exp(4.0 * n * alpha * std::log((2.0 * n + 1.0) / (2.0 * n))) * q_odd / q_even;
}

double z_ratio(double alpha, int particles) {
  if (particles < 1) throw DomainError("z_ratio requires N >= 1");
  if (near(alpha, 0.25) || near(alpha, 0.5)) {
    const double n = particles;
    return std::exp(n * std::log1p(1.0 / (2.0 * n)));
  }
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("z_ratio requires alpha in (0, 1/2]");
  return z_ratio_bruteforce(alpha, particles);
}

std::vector<CoulombRow> coulomb_table(int min_sites, int max_sites) {
  std::vector<CoulombRow> rows;
  for (int beta : {2, 4}) {
    for (int L = min_sites; L <= max_sites; ++L) {
      for (int n = 1; n < L; ++n) {
        CoulombRow row;
        row.beta = beta;
        row.sites = L;
        row.particles = n;
        row.exact = coulomb_q(beta, L, n).convert_to<double>();
        row.bruteforce = coulomb_q_bruteforce(beta, L, n);
        row.rel_err = std::abs(row.bruteforce - row.exact) / std::abs(row.exact);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace oddity
