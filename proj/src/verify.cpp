#include "oddity/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "oddity/basis.hpp"
#include "oddity/errors.hpp"
#include "oddity/exact_points.hpp"
#include "oddity/free_fermion.hpp"
#include "oddity/ground_state.hpp"
#include "oddity/imps.hpp"
#include "oddity/parallel.hpp"
#include "oddity/scaling.hpp"

namespace oddity {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::string sci(double x) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << x;
  return s.str();
}

SolverOptions solver_options(XySign sign = XySign::kMinus) {
  SolverOptions o;
  o.xy_sign = sign;
  return o;
}

GroundState solve(int sites, int n_up, double delta, XySign sign = XySign::kMinus) {
  return ground_state({sites, n_up}, delta, solver_options(sign));
}

GroundState solve_canonical(int sites, double delta, XySign sign = XySign::kMinus) {
  return ground_state(Sector::canonical(sites), delta, solver_options(sign));
}

double p_max_of(const std::vector<double>& p) { return *std::max_element(p.begin(), p.end()); }

/// Projector diagonal / k for an arbitrary orthonormal basis of an eigenspace.
std::vector<double> projector_density(const std::vector<std::vector<double>>& vectors) {
  std::vector<double> p(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.size(); ++i) p[i] += v[i] * v[i];
  }
  for (auto& x : p) x /= static_cast<double>(vectors.size());
  return p;
}

// The momentum-space Slater determinant |det M|^2, M_jk = e^{i q_j n_k}/sqrt(L),
// q_j = 2 pi (shift + j)/L.
double explicit_slater(int sites, const std::vector<int>& pos, double shift) {
  const auto n = static_cast<Eigen::Index>(pos.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double q = 2.0 * std::numbers::pi * (shift + static_cast<double>(j)) / sites;
    for (Eigen::Index k = 0; k < n; ++k) {
      m(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(sites)),
                           q * pos[static_cast<std::size_t>(k)]);
    }
  }
  return std::norm(m.partialPivLu().determinant());
}

std::vector<int> random_positions(int sites, int particles, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(sites));
  for (int i = 0; i < sites; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(particles));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<Check> build_checks() {
  std::vector<Check> c;
  auto add = [&](std::string group, std::string name,
                 std::function<std::string(const CheckContext&)> fn) {
    c.push_back({std::move(group), std::move(name), std::move(fn)});
  };

  // ---- basis ------------------------------------------------------------
  add("basis", "ranking", [](const CheckContext& ctx) {
    int sectors = 0;
    for (int L = 3; L <= 12; ++L) {
      for (int n = 0; n <= L; ++n) {
        const SectorBasis b({L, n});
        ctx.expect_true(b.size() == binomial(L, n), "dimension of L=" + std::to_string(L));
        for (std::size_t i = 0; i < b.size(); ++i) {
          ctx.expect_true(b.index(b.config(i)) == i, "index(config(i)) == i");
        }
        ++sectors;
      }
    }
    return std::to_string(sectors) + " sectors round-trip";
  });

  add("basis", "translate", [](const CheckContext& ctx) {
    ctx.expect_true(translate({0b0101, 4}, 1).bits == 0b1010, "0101 shifted by 1");
    for (int L : {5, 8, 11}) {
      for (const auto s : sector_basis(Sector::canonical(L))) {
        ctx.expect_true(translate(s, 0) == s, "identity shift");
        ctx.expect_true(translate(translate(s, 2), 3) == translate(s, 5), "additive shifts");
        ctx.expect_true(translate(s, L) == s, "full turn");
      }
    }
    return std::string("shifts compose mod L");
  });

  add("basis", "neel", [](const CheckContext& ctx) {
    for (int L = 3; L <= 21; ++L) {
      const auto neel = neel_states(Sector::canonical(L));
      ctx.expect_true(neel.size() == (L % 2 ? static_cast<std::size_t>(L) : 2u),
                      "Neel orbit size at L=" + std::to_string(L));
      for (const auto s : neel) {
        ctx.expect_true(parallel_bond_count(s) == (L % 2 ? 1 : 0),
                        "parallel bonds of " + to_string(s));
      }
    }
    return std::string("orbit sizes and bond counts for L=3..21");
  });

  // ---- exact diagonalisation ---------------------------------------------
  add("ed", "dense-oracle", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 10; ++L) {
      for (double d : {-0.7, 0.0, 0.5, 1.0}) {
        for (XySign sign : {XySign::kMinus, XySign::kPlus}) {
          const GroundState a = solve_canonical(L, d, sign);
          const GroundState b = dense_ground_state(Sector::canonical(L), d, sign);
          ctx.expect_near(a.energy, b.energy, 1e-9, "energy L=" + std::to_string(L));
          ctx.expect_true(a.eigenspace.size() == b.eigenspace.size(), "multiplicity");
          const double pa = p_max_of(a.probabilities());
          const double pb = p_max_of(b.probabilities());
          ctx.expect_near(pa, pb, 1e-9, "p_max L=" + std::to_string(L));
          worst = std::max(worst, std::abs(pa - pb));
        }
      }
    }
    return "max |dp_max| " + sci(worst);
  });

  add("ed", "normalization", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 14; ++L) {
      for (double d : {-0.5, 0.3, 1.0}) {
        const auto p = solve_canonical(L, d).probabilities();
        double s = 0.0;
        for (double x : p) s += x;
        ctx.expect_near(s, 1.0, 1e-12, "sum of probabilities");
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
    return "max |sum p - 1| " + sci(worst);
  });

  add("ed", "translation-invariance", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 6; L <= 13; ++L) {
      for (XySign sign : {XySign::kMinus, XySign::kPlus}) {
        const GroundState gs = solve_canonical(L, 0.37, sign);
        const auto p = gs.probabilities();
        for (std::size_t i = 0; i < p.size(); ++i) {
          const auto j = gs.basis->index(translate(gs.basis->config(i), 1));
          worst = std::max(worst, std::abs(p[i] - p[j]));
        }
      }
    }
    ctx.expect_near(worst, 0.0, 1e-10, "|p(x) - p(Tx)|");
    return "max deviation " + sci(worst);
  });

  add("ed", "neel-argmax", [](const CheckContext& ctx) {
    int points = 0;
    for (int L = 4; L <= 15; ++L) {
      const SectorSolver solver(Sector::canonical(L));
      for (double d : default_delta_grid(10)) {
        const ScanRow row = scan_point(solver, d, solver_options());
        ctx.expect_true(row.ok(), "L=" + std::to_string(L) + " delta=" + fmt(d) + ": " + row.error);
        const auto gs = solver.solve(d, solver_options());
        const auto me = min_entropy(gs);
        const auto neel = neel_states(solver.sector());
        for (const auto& t : me.ties) {
          ctx.expect_true(std::binary_search(neel.begin(), neel.end(), t), "tie outside Neel orbit");
        }
        ++points;
      }
    }
    return std::to_string(points) + " (L, delta) points, argmax and ties in the Neel orbit";
  });

  add("ed", "spin-flip", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 13; L += 2) {
      for (double d : {-0.5, 0.25, 0.9}) {
        const auto up = solve(L, (L + 1) / 2, d);
        const auto down = solve(L, (L - 1) / 2, d);
        ctx.expect_near(up.energy, down.energy, 1e-9, "energy of flipped sector");
        const double s_up = min_entropy(up).s_inf;
        const double s_down = min_entropy(down).s_inf;
        ctx.expect_near(s_up, s_down, 1e-9, "S_inf of flipped sector");
        worst = std::max(worst, std::abs(s_up - s_down));
      }
    }
    return "max |dS| " + sci(worst);
  });

  add("ed", "degenerate-invariance", [](const CheckContext& ctx) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    int degenerate = 0;
    for (int L = 5; L <= 11; L += 2) {
      const GroundState gs = solve_canonical(L, 0.5, XySign::kPlus);
      if (!gs.degenerate) continue;
      ++degenerate;
      const double ref = p_max_of(gs.probabilities());
      const auto k = static_cast<Eigen::Index>(gs.eigenspace.size());
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd g(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) g(i, j) = gauss(rng);
        }
        const Eigen::MatrixXd q = g.householderQr().householderQ();
        std::vector<std::vector<double>> rotated(gs.eigenspace.size(),
                                                 std::vector<double>(gs.basis->size(), 0.0));
        for (Eigen::Index a = 0; a < k; ++a) {
          for (Eigen::Index b = 0; b < k; ++b) {
            const auto& v = gs.eigenspace[static_cast<std::size_t>(b)];
            auto& out = rotated[static_cast<std::size_t>(a)];
            for (std::size_t i = 0; i < v.size(); ++i) out[i] += q(b, a) * v[i];
          }
        }
        const double p = p_max_of(projector_density(rotated));
        worst = std::max(worst, std::abs(p - ref));
      }
    }
    ctx.expect_true(degenerate > 0, "expected a degenerate odd ring in the plus gauge");
    ctx.expect_near(worst, 0.0, 1e-8, "p_max under eigenspace rotation");
    return std::to_string(degenerate) + " degenerate rings, max |dp_max| " + sci(worst);
  });

  add("ed", "rs-exact", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 15; L += 2) {
      const GroundState gs = solve_canonical(L, 0.5);
      const double exact = rs_pmax((L - 1) / 2).convert_to<double>();
      const double got = p_max_of(gs.probabilities());
      ctx.expect_rel(got, exact, 1e-8, "p_max at L=" + std::to_string(L));
      ctx.expect_near(gs.energy, -1.5 * L, 1e-9, "energy -3L/2");
      worst = std::max(worst, std::abs(got - exact) / exact);
    }
    return "max relative error " + sci(worst);
  });

  add("ed", "rs-integers", [](const CheckContext& ctx) {
    for (int n = 1; n <= 6; ++n) {
      const GroundState gs = solve_canonical(2 * n + 1, 0.5);
      const auto& v = gs.amplitudes();
      const double lo = *std::min_element(v.begin(), v.end());
      const double hi = *std::max_element(v.begin(), v.end());
      ctx.expect_true(lo > 0.0, "ground state positive");
      double norm2 = 0.0;
      for (double x : v) {
        const double r = x / lo;
        ctx.expect_near(r, std::round(r), 1e-6, "integer component");
        norm2 += r * r;
      }
      ctx.expect_rel(hi / lo, asm_count(n).convert_to<double>(), 1e-9, "largest = A(N)");
      ctx.expect_rel(norm2, rs_norm_squared(n).convert_to<double>(), 1e-9, "norm squared");
    }
    return std::string("integer components, largest A(N) for N=1..6");
  });

  add("ed", "rs-asymptotic", [](const CheckContext& ctx) {
    double prev = std::numeric_limits<double>::infinity();
    for (int L = 5; L <= 21; L += 2) {
      const double diff = rs_asymptotic_entropy(L) + rs_log_pmax((L - 1) / 2);
      ctx.expect_true(diff < prev, "asymptotic - exact decreasing at L=" + std::to_string(L));
      prev = diff;
    }
    return "asymptotic - exact at L=21: " + fmt(prev);
  });

  add("ed", "even-baseline", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 4; L <= 16; L += 2) {
      const int n = L / 2;
      const double s = min_entropy(solve_canonical(L, 0.0)).s_inf;
      ctx.expect_near(s, n * std::numbers::ln2, 1e-8, "S_inf at L=" + std::to_string(L));
      ctx.expect_near(slater_log_probability(L, alternating_positions(n)).log_p,
                      -n * std::numbers::ln2, 1e-12, "closed form 2^-N");
      ctx.expect_near(even_min_entropy(n), n * std::numbers::ln2, 0.0, "even_min_entropy");
      worst = std::max(worst, std::abs(s - n * std::numbers::ln2));
    }
    return "max |S - N log 2| " + sci(worst);
  });

  // ---- free fermions -------------------------------------------------------
  add("free-fermion", "slater-vs-determinant", [](const CheckContext& ctx) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int L = 4 + trial % 7;
      const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(L - 1));
      const auto pos = random_positions(L, n, rng);
      const double log_domain = slater_log_probability(L, pos).probability();
      const double direct = explicit_slater(L, pos, 0.0);
      ctx.expect_near(log_domain, direct, 1e-10, "Slater probability");
      worst = std::max(worst, std::abs(log_domain - direct));
    }
    return "50 random sets, max deviation " + sci(worst);
  });

  add("free-fermion", "momentum-shift", [](const CheckContext& ctx) {
    std::mt19937_64 rng(13);
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const int L = 5 + trial % 6;
      const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(L - 1));
      const auto pos = random_positions(L, n, rng);
      const double base = explicit_slater(L, pos, 0.0);
      for (double shift : {0.5, -(n - 1) / 2.0, 3.25}) {
        worst = std::max(worst, std::abs(explicit_slater(L, pos, shift) - base));
      }
    }
    ctx.expect_near(worst, 0.0, 1e-12, "|det M|^2 under a uniform momentum shift");
    return "max deviation " + sci(worst);
  });

  add("free-fermion", "examples", [](const CheckContext& ctx) {
    ctx.expect_near(slater_log_probability(4, std::vector<int>{1, 3}).probability(), 0.25, 1e-14,
                    "p(4; 1,3)");
    ctx.expect_near(slater_log_probability(4, std::vector<int>{1, 2}).probability(), 0.125, 1e-14,
                    "p(4; 1,2)");
    for (int L = 4; L <= 10; ++L) {
      for (int n = 1; n < L; ++n) {
        double s = 0.0;
        for (const auto cfg : sector_basis({L, n})) s += slater_log_probability(L, n, cfg).probability();
        ctx.expect_near(s, 1.0, 1e-12, "normalisation L=" + std::to_string(L));
      }
    }
    return std::string("p(4;1,3)=1/4, p(4;1,2)=1/8, normalised for L<=10");
  });

  add("free-fermion", "ed-agreement", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 12; ++L) {
      const GroundState gs = solve_canonical(L, 0.0);
      const auto p = gs.probabilities();
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double f = slater_log_probability(L, gs.sector.n_up, gs.basis->config(i)).probability();
        worst = std::max(worst, std::abs(f - p[i]));
      }
    }
    ctx.expect_near(worst, 0.0, 1e-10, "ED vs Slater at delta = 0");
    return "max |p_ED - p_Slater| " + sci(worst);
  });

  add("free-fermion", "translation", [](const CheckContext& ctx) {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const int L = 5 + trial % 20;
      const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(L - 1));
      const auto cfg = config_from_up_sites(L, random_positions(L, n, rng));
      const double a = slater_log_probability(L, n, cfg).log_p;
      const double b = slater_log_probability(L, n, translate(cfg, 1 + trial % (L - 1))).log_p;
      worst = std::max(worst, std::abs(a - b));
    }
    ctx.expect_near(worst, 0.0, 1e-11, "log p under translation");
    return "max deviation " + sci(worst);
  });

  add("free-fermion", "w-vs-direct", [](const CheckContext& ctx) {
    double worst = 0.0;
    ctx.expect_near(w_log_det(1), 0.0, 1e-15, "det W at N=1");
    for (int n = 1; n <= 12; ++n) {
      const double a = xx_entropy_difference(n);
      const double b = xx_entropy_difference_direct(n);
      ctx.expect_near(a, b, 1e-10, "N=" + std::to_string(n));
      worst = std::max(worst, std::abs(a - b));
    }
    return "max |W form - direct| " + sci(worst);
  });

  add("free-fermion", "hadamard", [](const CheckContext& ctx) {
    for (int n = 1; n <= 30; ++n) {
      ctx.expect_near(vandermonde_log_abs_det(2 * n, n), hadamard_log_bound(n), 1e-9,
                      "even bound saturated at N=" + std::to_string(n));
      if (n >= 2) {
        ctx.expect_true(vandermonde_log_abs_det(2 * n + 1, n) < hadamard_log_bound(n) - 1e-9,
                        "odd strictly below at N=" + std::to_string(n));
      }
    }
    return std::string("saturated for L=2N, strict for L=2N+1, N<=30");
  });

  add("free-fermion", "prefactor-limit", [](const CheckContext& ctx) {
    const double n = 1e6;
    const double v = std::exp(-n * std::log1p(1.0 / (2.0 * n)));
    ctx.expect_near(v, std::exp(-0.5), 1e-6, "(2N/(2N+1))^N at N=1e6");
    return "|prefactor - e^-1/2| " + sci(std::abs(v - std::exp(-0.5)));
  });

  add("free-fermion", "fig2b-fit", [](const CheckContext& ctx) {
    std::vector<ScalingPoint> pts;
    for (const auto& r : xx_difference_table(2, 25)) {
      pts.push_back({static_cast<double>(r.odd_sites), r.entropy_difference});
    }
    const ScalingFit f = fit_scaling(pts);
    ctx.expect_in(f.b, 0.254, 0.259, "b");
    ctx.expect_in(f.c, 0.126, 0.146, "c");
    ctx.expect_in(f.a, -1e-3, 1e-3, "a");
    return "a=" + sci(f.a) + " b=" + fmt(f.b) + " c=" + fmt(f.c);
  });

  // ---- Razumov-Stroganov point --------------------------------------------
  add("rs", "asm-counts", [](const CheckContext& ctx) {
    const long long known[] = {1, 2, 7, 42, 429, 7436, 218348, 10850216, 911835460, 129534272700};
    for (int n = 1; n <= 10; ++n) {
      ctx.expect_true(asm_count(n) == known[n - 1], "A(" + std::to_string(n) + ")");
    }
    ctx.expect_true(rs_pmax(2) == ExactRational(4, 25), "p_max(L=5) = 4/25");
    return std::string("A(1..10) and p_max(5) = 4/25");
  });

  add("rs", "gamma", [](const CheckContext& ctx) {
    ctx.expect_near(static_cast<double>(kGammaTwoThirds), std::tgamma(2.0 / 3.0), 1e-15,
                    "Gamma(2/3)");
    return std::string("Gamma(2/3) constant");
  });

  // ---- Coulomb gas ------------------------------------------------------
  add("coulomb", "q2", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 1; L <= 12; ++L) {
      for (int n = 0; n <= L; ++n) {
        for (bool orbits : {false, true}) {
          if (orbits && n == 0) continue;
          const double q = coulomb_q_bruteforce(2.0, L, n, orbits);
          ctx.expect_rel(q, 1.0, 1e-10, "Q_2(" + std::to_string(L) + "," + std::to_string(n) + ")");
          worst = std::max(worst, std::abs(q - 1.0));
        }
      }
    }
    return "max |Q_2 - 1| " + sci(worst);
  });

  add("coulomb", "q4", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 1; L <= 12; ++L) {
      for (int n = 0; n <= L; ++n) {
        const double exact = coulomb_q(4, L, n).convert_to<double>();
        const double brute = coulomb_q_bruteforce(4.0, L, n);
        ctx.expect_rel(brute, exact, 1e-10, "Q_4(" + std::to_string(L) + "," + std::to_string(n) + ")");
        worst = std::max(worst, std::abs(brute - exact) / exact);
      }
    }
    ctx.expect_true(coulomb_q(4, 4, 2) == ExactRational(3, 16), "Q_4(4,2) = 3/16");
    return "max relative error " + sci(worst) + ", Q_4(4,2) = 3/16";
  });

  add("coulomb", "z-ratio-symbolic", [](const CheckContext& ctx) {
    for (double alpha : {0.25, 0.5}) {
      for (int n = 1; n <= 30; ++n) {
        BigInt num = 1;
        BigInt den = 1;
        for (int i = 0; i < n; ++i) {
          num *= 2 * n + 1;
          den *= 2 * n;
        }
        ctx.expect_true(z_ratio_exact(alpha, n) == ExactRational(num, den),
                        "x = ((2N+1)/2N)^N at N=" + std::to_string(n));
      }
      for (int n = 1; n <= 6; ++n) {
        ctx.expect_rel(z_ratio_bruteforce(alpha, n), z_ratio(alpha, n), 1e-10, "enumerated x");
      }
    }
    return std::string("exact for N<=30, enumeration for N<=6");
  });

  add("coulomb", "z-ratio-limit", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (double alpha : {0.25, 0.5}) {
      const double x = z_ratio(alpha, 10000);
      ctx.expect_near(x, std::exp(0.5), 1e-3, "x at N=1e4");
      worst = std::max(worst, std::abs(x - std::exp(0.5)));
    }
    return "|x - e^1/2| " + sci(worst);
  });

  // ---- iMPS ansatz ------------------------------------------------------
  add("imps", "decomposition", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (double alpha : {0.25, 0.5}) {
      for (int n = 1; n <= 6; ++n) {
        const auto t = entropy_diff_decomposition(alpha, n);
        const double direct = imps_entropy_difference(alpha, n);
        ctx.expect_near(t.total, direct, 1e-10, "N=" + std::to_string(n));
        worst = std::max(worst, std::abs(t.total - direct));
      }
    }
    return "max |terms - direct| " + sci(worst);
  });

  add("imps", "size-term-limit", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (double alpha : {0.125, 0.25, 1.0 / 3.0, 0.5}) {
      const double n = 1e4;
      const double term = -4.0 * alpha * n * std::log1p(1.0 / (2.0 * n));
      ctx.expect_near(-term, 2.0 * alpha, 1e-4, "-term2 at N=1e4");
      worst = std::max(worst, std::abs(-term - 2.0 * alpha));
    }
    return "max |-term2 - 2 alpha| " + sci(worst);
  });

  add("imps", "pmax-is-max", [](const CheckContext& ctx) {
    for (double alpha : {0.125, 0.25, 1.0 / 3.0, 0.5}) {
      for (int L = 4; L <= 14; ++L) {
        const int n = L / 2;
        const double log_z = z_alpha(alpha, L, n);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto cfg : sector_basis({L, n})) {
          best = std::max(best, 2.0 * imps_log_weight(alpha, cfg).log_modulus - log_z);
        }
        ctx.expect_near(imps_log_pmax(alpha, L, n), best, 1e-10, "L=" + std::to_string(L));
      }
    }
    return std::string("alternating configuration is maximal for L<=14");
  });

  add("imps", "fidelity", [](const CheckContext& ctx) {
    double lowest = 1.0;
    for (double d : {-0.5, 0.0, 0.5, 1.0}) {
      for (int L = 5; L <= 16; ++L) {
        const double f = ansatz_fidelity(alpha_from_delta(d), solve_canonical(L, d));
        ctx.expect_true(f >= 0.99, "fidelity " + fmt(f) + " at L=" + std::to_string(L) +
                                       " delta=" + fmt(d));
        lowest = std::min(lowest, f);
      }
    }
    return "lowest fidelity " + fmt(lowest);
  });

  add("imps", "fidelity-free", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int L = 5; L <= 16; ++L) {
      const double f = ansatz_fidelity(0.25, solve_canonical(L, 0.0));
      ctx.expect_near(f, 1.0, 1e-9, "fidelity at delta=0, L=" + std::to_string(L));
      worst = std::max(worst, std::abs(1.0 - f));
    }
    return "max |1 - F| " + sci(worst);
  });

  // ---- scaling ----------------------------------------------------------
  add("scaling", "radius-identity", [](const CheckContext& ctx) {
    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const double d = -1.0 + 2.0 * k / 1000.0;
      const double r = radius_from_delta(d);
      const double diff = std::numbers::pi * r * r - alpha_from_delta(d);
      worst = std::max(worst, std::abs(diff));
      AnsatzParams::from_delta(d).check(1e-12);
    }
    ctx.expect_near(worst, 0.0, 1e-12, "pi R^2 - alpha");
    return "max |pi R^2 - alpha| " + sci(worst);
  });

  add("scaling", "conversions", [](const CheckContext& ctx) {
    ctx.expect_near(alpha_from_delta(0.0), 0.25, 1e-15, "alpha(0)");
    ctx.expect_near(alpha_from_delta(0.5), 1.0 / 3.0, 1e-15, "alpha(1/2)");
    ctx.expect_near(alpha_from_delta(1.0), 0.5, 1e-15, "alpha(1)");
    ctx.expect_near(alpha_from_delta(-1.0), 0.0, 1e-15, "alpha(-1)");
    ctx.expect_near(radius_from_delta(-1.0), 0.0, 1e-15, "R(-1)");
    ctx.expect_true(std::isinf(luttinger_from_radius(0.0)), "K at R=0");
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double a = 0.5 * k / 1000.0;
      worst = std::max(worst, std::abs(alpha_from_delta(delta_from_alpha(a)) - a));
    }
    ctx.expect_near(worst, 0.0, 1e-14, "alpha(delta(alpha))");
    return "round trip " + sci(worst);
  });

  add("scaling", "fit-properties", [](const CheckContext& ctx) {
    std::vector<ScalingPoint> pts;
    for (int L = 5; L <= 25; L += 2) {
      const double x = L;
      pts.push_back({x, 0.3 * x + 0.25 * std::log(x) + 0.1 + 1e-3 * std::sin(x)});
    }
    const ScalingFit f = fit_scaling(pts);
    std::vector<ScalingPoint> again;
    for (const auto& p : pts) again.push_back({p.sites, f.predict(p.sites)});
    const ScalingFit g = fit_scaling(again);
    ctx.expect_near(g.a, f.a, 1e-12, "idempotent a");
    ctx.expect_near(g.b, f.b, 1e-12, "idempotent b");
    ctx.expect_near(g.c, f.c, 1e-12, "idempotent c");
    auto shifted = pts;
    for (auto& p : shifted) p.entropy += 0.7 + 0.05 * p.sites;
    const ScalingFit h = fit_scaling(shifted);
    ctx.expect_near(h.a - f.a, 0.05, 1e-12, "slope shift");
    ctx.expect_near(h.b, f.b, 1e-12, "log term unchanged");
    ctx.expect_near(h.c - f.c, 0.7, 1e-12, "constant shift");
    std::vector<ScalingPoint> exact;
    for (const auto& p : pts) exact.push_back({p.sites, 0.3 * p.sites + 0.25 * std::log(p.sites) + 0.1});
    const ScalingFit e = fit_scaling(exact);
    ctx.expect_near(e.b, 0.25, 1e-10, "exact model b");
    return std::string("idempotent, equivariant, exact recovery");
  });

  return c;
}

}  // namespace

void CheckContext::expect_near(double got, double want, double abs_tol, const std::string& what) const {
  const double g = measured(got);
  if (!(std::abs(g - want) <= abs_tol)) {
    throw CheckFailure(what + ": got " + fmt(g) + ", want " + fmt(want) + " +- " + sci(abs_tol));
  }
}

void CheckContext::expect_rel(double got, double want, double rel_tol, const std::string& what) const {
  const double g = measured(got);
  if (!(std::abs(g - want) <= rel_tol * std::abs(want))) {
    throw CheckFailure(what + ": got " + fmt(g) + ", want " + fmt(want) + " (rel " + sci(rel_tol) + ")");
  }
}

void CheckContext::expect_true(bool condition, const std::string& what) const {
  if (!condition || faulty_) throw CheckFailure(what);
}

void CheckContext::expect_in(double got, double lo, double hi, const std::string& what) const {
  const double g = measured(got);
  if (!(g >= lo && g <= hi)) {
    throw CheckFailure(what + " = " + fmt(g) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = build_checks();
  return checks;
}

bool matches_filter(const Check& check, const std::string& filter) {
  if (filter.empty()) return true;
  std::stringstream ss(filter);
  std::string item;
  const std::string id = check.id();
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == check.group || id.rfind(item, 0) == 0) return true;
  }
  return false;
}

std::vector<CheckResult> run_checks(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result) {
  std::vector<const Check*> selected;
  for (const auto& c : all_checks()) {
    if (matches_filter(c, options.filter)) selected.push_back(&c);
  }
  if (selected.empty()) throw DomainError("filter '" + options.filter + "' selects no checks");

  std::vector<CheckResult> results(selected.size());
  auto run_one = [&](std::size_t i) {
    const Check& c = *selected[i];
    CheckResult& r = results[i];
    r.group = c.group;
    r.name = c.name;
    const bool faulty = !options.inject_fault.empty() && matches_filter(c, options.inject_fault);
    const CheckContext ctx(faulty);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = c.run(ctx);
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
      r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (options.jobs <= 1) {
    for (std::size_t i = 0; i < selected.size(); ++i) {
      run_one(i);
      if (on_result) on_result(results[i]);
    }
  } else {
    parallel_for(selected.size(), options.jobs, run_one);
    if (on_result) {
      for (const auto& r : results) on_result(r);
    }
  }
  return results;
}

}  // namespace oddity
