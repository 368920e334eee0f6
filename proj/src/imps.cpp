#include "oddity/imps.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "oddity/errors.hpp"
#include "oddity/free_fermion.hpp"
#include "oddity/scaling.hpp"

namespace oddity {

namespace {

void require_enumerable(int sites, int particles, double cap) {
  if (sites < 1 || particles < 0 || particles > sites) {
    throw DomainError("ansatz requires 0 <= N <= L");
  }
  if (sites > kMaxSites) throw SizingError("ansatz enumeration limited to 63 sites");
  const double count = static_cast<double>(binomial(sites, particles));
  if (count > cap) {
    std::ostringstream msg;
    msg << "ansatz enumeration of " << count << " configurations exceeds the cap " << cap;
    throw SizingError(msg.str());
  }
}

// Streaming log-sum-exp.
class LogSum {
 public:
  void add(double x) {
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

}  // namespace

AnsatzParams AnsatzParams::from_delta(double delta) {
  AnsatzParams p;
  p.delta = delta;
  p.alpha = alpha_from_delta(delta);
  p.radius = radius_from_delta(delta);
  p.luttinger = luttinger_from_radius(p.radius);
  return p;
}

AnsatzParams AnsatzParams::from_alpha(double alpha) { return from_delta(delta_from_alpha(alpha)); }

void AnsatzParams::check(double tol) const {
  const double pi = std::numbers::pi;
  const double r2 = radius * radius;
  auto fail = [](const char* what) { throw InvariantError(std::string("AnsatzParams: ") + what); };
  if (std::abs(delta + std::cos(2.0 * pi * alpha)) > tol) fail("delta != -cos(2 pi alpha)");
  if (std::abs(r2 - (1.0 / (2.0 * pi) - std::acos(delta) / (2.0 * pi * pi))) > tol) {
    fail("radius does not match delta");
  }
  if (std::abs(pi * r2 - alpha) > tol) fail("pi R^2 != alpha");
  if (r2 > 0.0 && std::abs(luttinger - 1.0 / (4.0 * pi * r2)) > tol * luttinger) {
    fail("K != 1/(4 pi R^2)");
  }
}

AnsatzWeight imps_log_weight(double alpha, SpinConfig positions) {
  const std::vector<int> ups = up_sites(positions);
  AnsatzWeight w;
  w.log_modulus = 4.0 * alpha * log_chord_product(positions.length, ups);
  int sum = 0;
  for (int s : ups) sum += s;
  w.marshall_sign = sum % 2 == 0 ? 1 : -1;
  return w;
}

double z_alpha(double alpha, int sites, int particles, double cap) {
  require_enumerable(sites, particles, cap);
  std::vector<double> log_chord(static_cast<std::size_t>(sites), 0.0);
  for (int d = 1; d < sites; ++d) {
    log_chord[static_cast<std::size_t>(d)] =
        std::log(2.0 * std::sin(std::numbers::pi * d / static_cast<double>(sites)));
  }
  LogSum acc;
  if (particles == 0) return 0.0;
  // Lexicographic walk over 1-based position sets.
  std::vector<int> pos(static_cast<std::size_t>(particles));
  for (int j = 0; j < particles; ++j) pos[static_cast<std::size_t>(j)] = j + 1;
  while (true) {
    double lc = 0.0;
    for (std::size_t i = 1; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) lc += log_chord[static_cast<std::size_t>(pos[i] - pos[j])];
    }
    acc.add(8.0 * alpha * lc);
    int j = particles - 1;
    while (j >= 0 && pos[static_cast<std::size_t>(j)] == sites - particles + j + 1) --j;
    if (j < 0) break;
    ++pos[static_cast<std::size_t>(j)];
    for (int k = j + 1; k < particles; ++k) {
      pos[static_cast<std::size_t>(k)] = pos[static_cast<std::size_t>(k - 1)] + 1;
    }
  }
  return acc.value();
}

double imps_log_pmax(double alpha, int sites, int particles, double cap) {
  const std::vector<int> pos = alternating_positions(particles);
  const double log_f = particles * std::log(static_cast<double>(sites)) +
                       slater_log_probability(sites, pos).log_p;
  return 4.0 * alpha * log_f - z_alpha(alpha, sites, particles, cap);
}

std::vector<double> ansatz_state(double alpha, const SectorBasis& basis, XySign sign) {
  const int L = basis.sector().sites;
  std::vector<double> log_mod(basis.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    log_mod[i] = imps_log_weight(alpha, {basis.states()[i], L}).log_modulus;
    top = std::max(top, log_mod[i]);
  }
  std::vector<double> psi(basis.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double a = std::exp(log_mod[i] - top);
    if (sign == XySign::kPlus) a *= imps_log_weight(alpha, {basis.states()[i], L}).marshall_sign;
    psi[i] = a;
    norm2 += a * a;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : psi) x *= inv;
  return psi;
}

double ansatz_fidelity(double alpha, const GroundState& gs) {
  if (gs.basis->size() > 1'000'000) throw SizingError("ansatz_fidelity limited to dimension 1e6");
  const std::vector<double> psi = ansatz_state(alpha, *gs.basis, gs.xy_sign);
  double f = 0.0;
  for (const auto& v : gs.eigenspace) {
    double overlap = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) overlap += v[i] * psi[i];
    f += overlap * overlap;
  }
  return std::min(f, 1.0);
}

EntropyDiffTerms entropy_diff_decomposition(double alpha, int particles, double cap) {
  if (particles < 1) throw DomainError("entropy_diff_decomposition requires N >= 1");
  const double n = particles;
  EntropyDiffTerms t;
  t.fermion_term = 4.0 * alpha * xx_entropy_difference_direct(particles);
  t.size_term = -4.0 * alpha * n * std::log1p(1.0 / (2.0 * n));
  t.partition_term =
      z_alpha(alpha, 2 * particles + 1, particles, cap) - z_alpha(alpha, 2 * particles, particles, cap);
  t.total = t.fermion_term + t.size_term + t.partition_term;
  return t;
}

double imps_entropy_difference(double alpha, int particles, double cap) {
  return imps_log_pmax(alpha, 2 * particles, particles, cap) -
         imps_log_pmax(alpha, 2 * particles + 1, particles, cap);
}

double imps_min_entropy(double alpha, int sites, double cap) {
  if (sites < 3) throw DomainError("imps_min_entropy requires L >= 3");
  return -imps_log_pmax(alpha, sites, sites / 2, cap);
}

}  // namespace oddity
