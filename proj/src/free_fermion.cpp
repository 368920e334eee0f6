#include "oddity/free_fermion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

#include "oddity/errors.hpp"
#include "oddity/parallel.hpp"

namespace oddity {

namespace {

struct LogDet {
  double log_abs = 0.0;
  double phase = 0.0;
};

LogDet lu_log_det(const Eigen::MatrixXcd& m) {
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const Eigen::MatrixXcd& u = lu.matrixLU();
  LogDet out;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const std::complex<double> d = u(i, i);
    if (std::abs(d) == 0.0) throw InvariantError("singular matrix in LU determinant");
    out.log_abs += std::log(std::abs(d));
    out.phase += std::arg(d);
  }
  if (lu.permutationP().determinant() < 0) out.phase += std::numbers::pi;
  return out;
}

}  // namespace

double LogProb::probability() const { return std::exp(log_p); }

double log_chord_product(int sites, std::span<const int> positions) {
  // Chords depend only on the separation; count them exactly before taking logs.
  std::vector<long long> count(static_cast<std::size_t>(sites / 2 + 1), 0);
  for (std::size_t i = 1; i < positions.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      int d = std::abs(positions[i] - positions[j]) % sites;
      ++count[static_cast<std::size_t>(std::min(d, sites - d))];
    }
  }
  const double step = std::numbers::pi / static_cast<double>(sites);
  double acc = 0.0;
  for (std::size_t d = 0; d < count.size(); ++d) {
    if (count[d] == 0) continue;
    acc += static_cast<double>(count[d]) * std::log(2.0 * std::sin(step * static_cast<double>(d)));
  }
  return acc;
}

LogProb slater_log_probability(int sites, std::span<const int> positions) {
  const auto n = static_cast<double>(positions.size());
  return {-n * std::log(static_cast<double>(sites)) + 2.0 * log_chord_product(sites, positions)};
}

LogProb slater_log_probability(int sites, int particles, SpinConfig positions) {
  if (positions.up_count() != particles) {
    throw ContractError("slater_log_probability: popcount does not match N");
  }
  if (particles < 1 || particles >= sites) {
    throw DomainError("slater_log_probability requires 1 <= N < L");
  }
  const std::vector<int> sites_up = up_sites(positions);
  return slater_log_probability(sites, sites_up);
}

std::vector<int> alternating_positions(int particles) {
  std::vector<int> out(static_cast<std::size_t>(particles));
  for (int j = 0; j < particles; ++j) out[static_cast<std::size_t>(j)] = 2 * j + 1;
  return out;
}

double even_min_entropy(int particles) {
  if (particles < 1) throw DomainError("even_min_entropy requires N >= 1");
  return static_cast<double>(particles) * std::numbers::ln2;
}

Eigen::MatrixXcd w_matrix(int particles) {
  if (particles < 1) throw DomainError("w_matrix requires N >= 1");
  const int n = particles;
  const double theta = 2.0 * std::numbers::pi / static_cast<double>(2 * n + 1);
  Eigen::MatrixXcd w(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r == c) {
        w(r, c) = 1.0;
      } else {
        const std::complex<double> eps = std::polar(1.0, theta * static_cast<double>(r - c));
        w(r, c) = -1.0 / (static_cast<double>(n) * (1.0 + eps));
      }
    }
  }
  return w;
}

double w_log_det(int particles) {
  const LogDet d = lu_log_det(w_matrix(particles));
  if (std::abs(std::sin(d.phase)) > 1e-9 || std::cos(d.phase) < 0.0) {
    std::ostringstream msg;
    msg << "det W is not real positive (phase " << d.phase << ") at N=" << particles;
    throw InvariantError(msg.str());
  }
  return d.log_abs;
}

double xx_entropy_difference(int particles) {
  const double n = particles;
  return n * std::log1p(1.0 / (2.0 * n)) - w_log_det(particles);
}

double xx_entropy_difference_direct(int particles) {
  if (particles < 1) throw DomainError("xx_entropy_difference_direct requires N >= 1");
  const std::vector<int> pos = alternating_positions(particles);
  const double log_even = slater_log_probability(2 * particles, pos).log_p;
  const double log_odd = slater_log_probability(2 * particles + 1, pos).log_p;
  return log_even - log_odd;
}

double vandermonde_log_abs_det(int sites, int particles) {
  const double theta = 4.0 * std::numbers::pi / static_cast<double>(sites);
  Eigen::MatrixXcd v(particles, particles);
  for (int r = 1; r <= particles; ++r) {
    for (int c = 1; c <= particles; ++c) {
      // Reduce n*m mod L before scaling to keep the angle small.
      v(r - 1, c - 1) = std::polar(1.0, theta * static_cast<double>((r * c) % sites));
    }
  }
  return lu_log_det(v).log_abs;
}

double hadamard_log_bound(int particles) {
  const double n = particles;
  return 0.5 * n * std::log(n);
}

std::vector<XxDiffRow> xx_difference_table(int first, int last, int jobs) {
  if (first < 1 || last < first) throw DomainError("xx_difference_table: need 1 <= first <= last");
  std::vector<XxDiffRow> rows(static_cast<std::size_t>(last - first + 1));
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const int n = first + static_cast<int>(i);
    const double log_det = w_log_det(n);
    rows[i] = {n, 2 * n + 1, static_cast<double>(n) * std::log1p(0.5 / n) - log_det, log_det};
  });
  return rows;
}

}  // namespace oddity
