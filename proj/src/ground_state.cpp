#include "oddity/ground_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "oddity/errors.hpp"

namespace oddity {

namespace {

void fix_phase(std::vector<double>& v) {
  if (v.empty()) return;
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0) {
    for (auto& x : v) x = -x;
  }
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<double> GroundState::probabilities() const {
  if (eigenspace.empty()) return {};
  std::vector<double> p(eigenspace.front().size(), 0.0);
  for (const auto& v : eigenspace) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += v[i] * v[i];
  }
  const double inv = 1.0 / static_cast<double>(eigenspace.size());
  for (auto& x : p) x *= inv;
  return p;
}

std::uint64_t solver_seed(const Sector& sector, double delta) {
  std::uint64_t bits = 0;
  const double canonical = delta == 0.0 ? 0.0 : delta;  // fold -0.0 onto +0.0
  std::memcpy(&bits, &canonical, sizeof bits);
  std::uint64_t h = splitmix(static_cast<std::uint64_t>(sector.sites));
  h = splitmix(h ^ static_cast<std::uint64_t>(sector.n_up));
  return splitmix(h ^ bits);
}

SectorSolver::SectorSolver(const Sector& sector, std::uint64_t cap)
    : graph_(std::make_shared<const SectorBasis>(sector, cap)) {}

GroundState SectorSolver::solve(double delta, const SolverOptions& options) const {
  const HoppingGraph& graph = graph_;
  const XySign sign = options.xy_sign;
  LanczosOptions lanczos = options.lanczos;
  lanczos.seed = solver_seed(sector(), delta);

  const LinearOperator op = [&graph, delta, sign](std::span<const double> x, std::span<double> y) {
    graph.apply(x, y, delta, sign);
  };
  Eigenspace space = lowest_eigenspace(op, graph.size(), lanczos);

  GroundState gs;
  gs.sector = sector();
  gs.delta = delta;
  gs.xy_sign = sign;
  gs.energy = space.energy;
  gs.basis = basis();
  gs.degenerate = space.degenerate();
  gs.residual = space.residual;
  gs.gap = space.next_value - space.energy;
  gs.eigenspace = std::move(space.vectors);
  for (auto& v : gs.eigenspace) fix_phase(v);
  return gs;
}

GroundState ground_state(const Sector& sector, double delta, const SolverOptions& options) {
  return SectorSolver(sector, options.dimension_cap).solve(delta, options);
}

GroundState dense_ground_state(const Sector& sector, double delta, XySign sign,
                               double degeneracy_tolerance) {
  auto basis = std::make_shared<const SectorBasis>(sector);
  const Eigen::MatrixXd h = dense_hamiltonian(*basis, delta, sign);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd& w = eig.eigenvalues();

  GroundState gs;
  gs.sector = sector;
  gs.delta = delta;
  gs.xy_sign = sign;
  gs.energy = w(0);
  gs.basis = basis;
  Eigen::Index d = 1;
  while (d < w.size() && w(d) - w(0) <= degeneracy_tolerance) ++d;
  gs.degenerate = d > 1;
  gs.gap = d < w.size() ? w(d) - w(0) : std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd v = eig.eigenvectors().col(k);
    gs.eigenspace.emplace_back(v.data(), v.data() + v.size());
    fix_phase(gs.eigenspace.back());
  }
  return gs;
}

MinEntropy min_entropy(std::span<const double> probabilities, const SectorBasis& basis,
                       double tie_tolerance) {
  if (probabilities.size() != basis.size()) {
    throw ContractError("min_entropy: probability vector does not match the basis");
  }
  const double p_max = *std::max_element(probabilities.begin(), probabilities.end());
  MinEntropy out;
  out.p_max = p_max;
  out.s_inf = -std::log(p_max);
  const double floor = p_max * (1.0 - tie_tolerance);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] >= floor) out.ties.push_back(basis.config(i));
  }
  out.argmax = out.ties.front();
  return out;
}

MinEntropy min_entropy(const GroundState& gs, double tie_tolerance) {
  const std::vector<double> p = gs.probabilities();
  return min_entropy(p, *gs.basis, tie_tolerance);
}

ScanRow scan_point(const SectorSolver& solver, double delta, const SolverOptions& options,
                   const ScanCache* cache) {
  const Sector& sector = solver.sector();
  if (cache != nullptr) {
    if (auto hit = cache->load(sector, delta, options.xy_sign)) return *hit;
  }
  ScanRow row;
  row.sites = sector.sites;
  row.n_up = sector.n_up;
  row.delta = delta;
  try {
    const GroundState gs = solver.solve(delta, options);
    const MinEntropy me = min_entropy(gs);
    row.energy = gs.energy;
    row.s_inf = me.s_inf;
    row.p_max = me.p_max;
    row.argmax = me.argmax;
    row.degenerate = gs.degenerate;
    if (sector.is_canonical()) {
      const auto neel = neel_states(sector);
      if (!std::binary_search(neel.begin(), neel.end(), me.argmax)) {
        throw InvariantError("argmax " + to_string(me.argmax) + " is not a Neel state");
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  if (cache != nullptr && row.ok()) cache->store(row, options.xy_sign);
  return row;
}

std::vector<ScanRow> entropy_scan(double delta, std::span<const int> sizes,
                                  const SolverOptions& options, const ScanCache* cache) {
  std::vector<ScanRow> rows;
  rows.reserve(sizes.size());
  for (int L : sizes) {
    try {
      const SectorSolver solver(Sector::canonical(L), options.dimension_cap);
      rows.push_back(scan_point(solver, delta, options, cache));
    } catch (const std::exception& e) {
      ScanRow row;
      row.sites = L;
      row.n_up = (L + 1) / 2;
      row.delta = delta;
      row.error = e.what();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace oddity
