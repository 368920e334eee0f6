#include "oddity/hamiltonian.hpp"

#include <bit>
#include <limits>
#include <string>

#include "oddity/errors.hpp"

namespace oddity {

namespace {

double hopping(XySign sign) { return sign == XySign::kPlus ? 2.0 : -2.0; }

// Bit j set when sites j and j+1 (cyclic) carry opposite spins.
std::uint64_t antiparallel_bonds(std::uint64_t bits, int length) {
  return bits ^ translate({bits, length}, -1).bits;
}

std::uint64_t exchange(std::uint64_t bits, int bond, int length) {
  const int next = bond + 1 == length ? 0 : bond + 1;
  return bits ^ (std::uint64_t{1} << bond) ^ (std::uint64_t{1} << next);
}

}  // namespace

std::string_view to_string(XySign sign) { return sign == XySign::kPlus ? "plus" : "minus"; }

XySign xy_sign_from_string(std::string_view text) {
  if (text == "plus" || text == "+") return XySign::kPlus;
  if (text == "minus" || text == "-") return XySign::kMinus;
  throw DomainError("xy sign must be 'plus' or 'minus', got '" + std::string(text) + "'");
}

std::vector<double> apply_hamiltonian(std::span<const double> v, const SectorBasis& basis,
                                      double delta, XySign sign) {
  if (v.size() != basis.size()) {
    throw ContractError("apply_hamiltonian: vector length " + std::to_string(v.size()) +
                        " does not match sector dimension " + std::to_string(basis.size()));
  }
  const int L = basis.sector().sites;
  const double t = hopping(sign);
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::uint64_t s = basis.states()[i];
    const std::uint64_t anti = antiparallel_bonds(s, L);
    const int n_anti = std::popcount(anti);
    double acc = delta * static_cast<double>(L - 2 * n_anti) * v[i];
    for (std::uint64_t w = anti; w != 0; w &= w - 1) {
      acc += t * v[basis.index(exchange(s, std::countr_zero(w), L))];
    }
    out[i] = acc;
  }
  return out;
}

HoppingGraph::HoppingGraph(std::shared_ptr<const SectorBasis> basis) : basis_(std::move(basis)) {
  const std::size_t n = basis_->size();
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw SizingError("hopping graph indices are 32-bit; sector too large");
  }
  const int L = basis_->sector().sites;
  offsets_.resize(n + 1);
  zz_.resize(n);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int n_anti = std::popcount(antiparallel_bonds(basis_->states()[i], L));
    offsets_[i] = total;
    total += static_cast<std::uint64_t>(n_anti);
    zz_[i] = static_cast<std::int8_t>(L - 2 * n_anti);
  }
  offsets_[n] = total;
  neighbours_.resize(total);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = basis_->states()[i];
    std::uint64_t k = offsets_[i];
    for (std::uint64_t w = antiparallel_bonds(s, L); w != 0; w &= w - 1) {
      neighbours_[k++] =
          static_cast<std::uint32_t>(basis_->index(exchange(s, std::countr_zero(w), L)));
    }
  }
}

void HoppingGraph::apply(std::span<const double> in, std::span<double> out, double delta,
                         XySign sign) const {
  const std::size_t n = size();
  const double t = hopping(sign);
  const double* x = in.data();
  const std::uint32_t* nb = neighbours_.data();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::uint64_t k = offsets_[i]; k < offsets_[i + 1]; ++k) acc += x[nb[k]];
    out[i] = delta * static_cast<double>(zz_[i]) * x[i] + t * acc;
  }
}

Eigen::MatrixXd dense_hamiltonian(const SectorBasis& basis, double delta, XySign sign) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (n > 6000) throw SizingError("dense_hamiltonian limited to dimension 6000");
  const int L = basis.sector().sites;
  const double t = hopping(sign);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint64_t s = basis.states()[static_cast<std::size_t>(i)];
    const std::uint64_t anti = antiparallel_bonds(s, L);
    h(i, i) = delta * static_cast<double>(L - 2 * std::popcount(anti));
    for (std::uint64_t w = anti; w != 0; w &= w - 1) {
      h(static_cast<Eigen::Index>(basis.index(exchange(s, std::countr_zero(w), L))), i) += t;
    }
  }
  return h;
}

}  // namespace oddity
