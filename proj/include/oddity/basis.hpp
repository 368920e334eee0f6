#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oddity {

inline constexpr int kMinSites = 3;
inline constexpr int kMaxSites = 63;
inline constexpr std::uint64_t kDefaultDimensionCap = std::uint64_t{1} << 31;

/// Up/down configuration of an L-site ring. Bit j set means site j+1 is up.
struct SpinConfig {
  std::uint64_t bits = 0;
  int length = 0;

  int up_count() const noexcept;
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
  friend auto operator<=>(const SpinConfig&, const SpinConfig&) = default;
};

enum class Parity { kEven, kOdd };

/// Fixed-magnetization subspace (L, N_up).
struct Sector {
  int sites = 0;
  int n_up = 0;

  /// The sector used for production runs: S^z = 0 for even L and
  /// S^z = +1/2 for odd L.
  static Sector canonical(int sites);

  Parity parity() const noexcept { return sites % 2 == 0 ? Parity::kEven : Parity::kOdd; }
  bool is_canonical() const noexcept;
  /// Spin-flip image (L, L - N_up).
  Sector flipped() const noexcept { return {sites, sites - n_up}; }
  std::uint64_t dimension() const;

  friend bool operator==(const Sector&, const Sector&) = default;
};

/// Exact binomial coefficient for n <= 63.
std::uint64_t binomial(int n, int k);

/// Throws DomainError unless 3 <= L <= 63 and 0 <= N_up <= L.
void validate(const Sector& sector);

/// Cyclic shift by k sites (site j -> site j+k). Any integer k is reduced mod L.
SpinConfig translate(SpinConfig config, int shift);

SpinConfig spin_flip(SpinConfig config);

/// Number of nearest-neighbour bonds (including the closing bond L-1) whose
/// two spins are equal.
int parallel_bond_count(SpinConfig config);

/// 1-based positions of the up spins, ascending.
std::vector<int> up_sites(SpinConfig config);

/// 1-based positions of the down spins, ascending.
std::vector<int> down_sites(SpinConfig config);

/// Build a configuration from 1-based up-spin positions.
SpinConfig config_from_up_sites(int length, const std::vector<int>& sites);

/// '0'/'1' string with site 1 leftmost.
std::string to_string(SpinConfig config);
SpinConfig config_from_string(std::string_view text);

/// Néel-type maximal states: the two alternating patterns for even L, and the
/// L translations of the single-spinon pattern for odd L. Sorted ascending.
std::vector<SpinConfig> neel_states(const Sector& sector);

/// Ordered basis of a sector. States are sorted by ascending bit word; the
/// index of a state is its combinatorial rank, so lookup needs no table.
class SectorBasis {
 public:
  explicit SectorBasis(const Sector& sector, std::uint64_t cap = kDefaultDimensionCap);

  const Sector& sector() const noexcept { return sector_; }
  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<std::uint64_t>& states() const noexcept { return states_; }

  SpinConfig config(std::size_t index) const { return {states_.at(index), sector_.sites}; }

  /// Rank of a bit word with popcount N_up. Undefined for other popcounts.
  std::size_t index(std::uint64_t bits) const noexcept;
  std::size_t index(SpinConfig config) const noexcept { return index(config.bits); }
  bool contains(SpinConfig config) const noexcept;

 private:
  Sector sector_;
  std::vector<std::uint64_t> states_;
  // choose_[n][k] = C(n, k) for 0 <= n <= L, 0 <= k <= N_up + 1.
  std::vector<std::vector<std::uint64_t>> choose_;
};

/// Convenience wrapper returning the ordered configurations.
std::vector<SpinConfig> sector_basis(const Sector& sector,
                                     std::uint64_t cap = kDefaultDimensionCap);

}  // namespace oddity
