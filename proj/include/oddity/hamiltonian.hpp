#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "oddity/basis.hpp"

namespace oddity {

/// Sign of the transverse exchange.
///
/// kPlus is the XXZ chain written with a global plus sign,
///   H = sum_i (sx_i sx_{i+1} + sy_i sy_{i+1} + delta sz_i sz_{i+1}),
/// and kMinus flips the sign of the transverse part only,
///   H = sum_i (-sx_i sx_{i+1} - sy_i sy_{i+1} + delta sz_i sz_{i+1}).
/// On even rings the two are related by rotating every second spin by pi
/// about z. On odd rings they are not: kMinus has a non-degenerate, positive
/// ground state in every sector and is the convention in which the
/// Razumov-Stroganov amplitudes hold at delta = 1/2.
enum class XySign { kPlus, kMinus };

std::string_view to_string(XySign sign);
XySign xy_sign_from_string(std::string_view text);

/// H v in Pauli-matrix normalisation (hopping amplitude 2, diagonal +-delta
/// per bond). Reference implementation that ranks every neighbour on the fly.
/// Throws ContractError if v.size() differs from the basis dimension.
std::vector<double> apply_hamiltonian(std::span<const double> v, const SectorBasis& basis,
                                      double delta, XySign sign = XySign::kPlus);

/// Sparse connectivity of the XXZ chain in one sector, independent of delta.
/// Row i lists the states reachable by exchanging one antiparallel pair.
class HoppingGraph {
 public:
  explicit HoppingGraph(std::shared_ptr<const SectorBasis> basis);

  const SectorBasis& basis() const noexcept { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_ptr() const noexcept { return basis_; }
  std::size_t size() const noexcept { return basis_->size(); }
  std::size_t nonzeros() const noexcept { return neighbours_.size(); }

  /// Number of parallel bonds minus number of antiparallel bonds of state i.
  int zz_balance(std::size_t i) const noexcept { return zz_[i]; }

  /// out = H in. Both spans must have size() entries and must not alias.
  void apply(std::span<const double> in, std::span<double> out, double delta,
             XySign sign) const;

 private:
  std::shared_ptr<const SectorBasis> basis_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> neighbours_;
  std::vector<std::int8_t> zz_;
};

/// Dense matrix of H for small sectors; oracle for the iterative solver.
Eigen::MatrixXd dense_hamiltonian(const SectorBasis& basis, double delta,
                                  XySign sign = XySign::kPlus);

}  // namespace oddity
