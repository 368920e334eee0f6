#include "oddity/basis.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "oddity/errors.hpp"

namespace oddity {

namespace {

std::uint64_t low_mask(int length) {
  return length >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1;
}

}  // namespace

int SpinConfig::up_count() const noexcept { return std::popcount(bits); }

Sector Sector::canonical(int sites) {
  if (sites < kMinSites || sites > kMaxSites) {
    throw DomainError("chain length must lie in [3, 63], got " + std::to_string(sites));
  }
  return {sites, (sites + 1) / 2};
}

bool Sector::is_canonical() const noexcept {
  return sites >= kMinSites && sites <= kMaxSites && n_up == (sites + 1) / 2;
}

std::uint64_t Sector::dimension() const {
  validate(*this);
  return binomial(sites, n_up);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using Wide = unsigned __int128;
  Wide value = 1;
  for (int i = 1; i <= k; ++i) {
    value = value * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(value);
}

void validate(const Sector& sector) {
  if (sector.sites < kMinSites || sector.sites > kMaxSites) {
    throw DomainError("chain length must lie in [3, 63], got " + std::to_string(sector.sites));
  }
  if (sector.n_up < 0 || sector.n_up > sector.sites) {
    throw DomainError("N_up must lie in [0, L]");
  }
}

SpinConfig translate(SpinConfig config, int shift) {
  const int L = config.length;
  int k = shift % L;
  if (k < 0) k += L;
  if (k == 0) return config;
  const std::uint64_t mask = low_mask(L);
  const std::uint64_t rotated = ((config.bits << k) | (config.bits >> (L - k))) & mask;
  return {rotated, L};
}

SpinConfig spin_flip(SpinConfig config) {
  return {~config.bits & low_mask(config.length), config.length};
}

int parallel_bond_count(SpinConfig config) {
  // Bit j of x is 1 when sites j and j+1 (cyclically) are antiparallel.
  const std::uint64_t x = config.bits ^ translate(config, -1).bits;
  return config.length - std::popcount(x);
}

std::vector<int> up_sites(SpinConfig config) {
  std::vector<int> sites;
  sites.reserve(static_cast<std::size_t>(std::popcount(config.bits)));
  for (std::uint64_t w = config.bits; w != 0; w &= w - 1) {
    sites.push_back(std::countr_zero(w) + 1);
  }
  return sites;
}

std::vector<int> down_sites(SpinConfig config) { return up_sites(spin_flip(config)); }

SpinConfig config_from_up_sites(int length, const std::vector<int>& sites) {
  SpinConfig config{0, length};
  for (int s : sites) {
    if (s < 1 || s > length) throw DomainError("site index out of range");
    config.bits |= std::uint64_t{1} << (s - 1);
  }
  return config;
}

std::string to_string(SpinConfig config) {
  std::string out(static_cast<std::size_t>(config.length), '0');
  for (int j = 0; j < config.length; ++j) {
    if ((config.bits >> j) & 1U) out[static_cast<std::size_t>(j)] = '1';
  }
  return out;
}

SpinConfig config_from_string(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxSites)) {
    throw DomainError("configuration string longer than 63 sites");
  }
  SpinConfig config{0, static_cast<int>(text.size())};
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (text[j] == '1') {
      config.bits |= std::uint64_t{1} << j;
    } else if (text[j] != '0') {
      throw DomainError("configuration string must contain only '0' and '1'");
    }
  }
  return config;
}

std::vector<SpinConfig> neel_states(const Sector& sector) {
  validate(sector);
  if (!sector.is_canonical()) {
    std::ostringstream msg;
    msg << "neel_states requires a canonical sector, got (L=" << sector.sites
        << ", N_up=" << sector.n_up << ")";
    throw DomainError(msg.str());
  }
  const int L = sector.sites;
  std::uint64_t alternating = 0;
  for (int j = 1; j < L; j += 2) alternating |= std::uint64_t{1} << j;

  std::vector<SpinConfig> out;
  if (sector.parity() == Parity::kEven) {
    const SpinConfig a{alternating, L};
    out = {a, translate(a, 1)};
  } else {
    // Down spins on sites 1, 3, ..., L-2 (1-based); the last site carries the
    // extra up spin that forms the parallel pair with site L-1.
    const SpinConfig base{alternating | (std::uint64_t{1} << (L - 1)), L};
    out.reserve(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) out.push_back(translate(base, k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SectorBasis::SectorBasis(const Sector& sector, std::uint64_t cap) : sector_(sector) {
  validate(sector);
  const std::uint64_t dim = binomial(sector.sites, sector.n_up);
  if (dim > cap) {
    std::ostringstream msg;
    msg << "sector (L=" << sector.sites << ", N_up=" << sector.n_up << ") has dimension " << dim
        << " above the cap " << cap;
    throw SizingError(msg.str());
  }

  const int L = sector.sites;
  const int k = sector.n_up;
  choose_.assign(static_cast<std::size_t>(L) + 1,
                 std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 2, 0));
  for (int n = 0; n <= L; ++n) {
    for (int r = 0; r <= k + 1; ++r) choose_[n][r] = binomial(n, r);
  }

  states_.reserve(dim);
  if (k == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks all k-subsets in increasing numeric order.
  std::uint64_t x = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << L;
  while (x < limit) {
    states_.push_back(x);
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    if (r == 0) break;
    x = (((r ^ x) >> 2) / c) | r;
  }
}

std::size_t SectorBasis::index(std::uint64_t bits) const noexcept {
  std::uint64_t rank = 0;
  int i = 1;
  for (std::uint64_t w = bits; w != 0; w &= w - 1, ++i) {
    rank += choose_[static_cast<std::size_t>(std::countr_zero(w))][static_cast<std::size_t>(i)];
  }
  return static_cast<std::size_t>(rank);
}

bool SectorBasis::contains(SpinConfig config) const noexcept {
  return config.length == sector_.sites && config.up_count() == sector_.n_up;
}

std::vector<SpinConfig> sector_basis(const Sector& sector, std::uint64_t cap) {
  const SectorBasis basis(sector, cap);
  std::vector<SpinConfig> out;
  out.reserve(basis.size());
  for (std::uint64_t s : basis.states()) out.push_back({s, sector.sites});
  return out;
}

}  // namespace oddity
