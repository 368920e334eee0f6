// Batch driver: every pipeline as a subcommand writing CSV or JSON.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 solver or sizing
// error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oddity/errors.hpp"
#include "oddity/exact_points.hpp"
#include "oddity/free_fermion.hpp"
#include "oddity/ground_state.hpp"
#include "oddity/imps.hpp"
#include "oddity/parallel.hpp"
#include "oddity/report.hpp"
#include "oddity/scaling.hpp"
#include "oddity/verify.hpp"

namespace {

using namespace oddity;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string delta;
  std::string sizes;
  std::string particles;
  std::string backend;
  std::string out;
  std::string format = "csv";
  double tol = 0.0;
  int jobs = 1;
  std::string xy_sign = "minus";
  std::string filter;
  std::string inject_fault;
};

RunConfig make_config(const std::string& sub, const Options& o) {
  RunConfig c;
  c.subcommand = sub;
  c.delta_spec = o.delta;
  c.sizes_spec = o.sizes;
  c.particles_spec = o.particles;
  c.backend = o.backend;
  c.out = o.out;
  c.format = o.format;
  if (o.tol > 0.0) c.tolerance = o.tol;
  c.xy_sign = o.xy_sign;
  c.filter = o.filter;
  c.jobs = o.jobs;
  return c;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.xy_sign = xy_sign_from_string(o.xy_sign);
  if (o.tol > 0.0) s.lanczos.tolerance = o.tol;
  return s;
}

void require_backend(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.backend == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError("backend '" + o.backend + "' not available here (choose from " + list + ")");
}

void emit(const Table& table, const RunConfig& config) {
  const OutputFormat format = output_format_from_string(config.format);
  std::ostringstream buf;
  write_table(buf, table, config, format);
  if (config.out.empty() || config.out == "-") {
    std::cout << buf.str();
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + config.out + "'");
  file << buf.str();
}

std::optional<DirectoryCache> env_cache() { return DirectoryCache::from_environment(); }

int cmd_scan_ed(const Options& o) {
  require_backend(o, {"ed"});
  const auto deltas = parse_delta_spec(o.delta);
  const auto sizes = parse_int_range(o.sizes);
  for (int L : sizes) {
    if (L < kMinSites || L > kMaxSites) throw UsageError("L must lie in [3, 63]");
  }
  const auto cache = env_cache();
  const SolverOptions opts = solver_options(o);
  std::vector<ScanRow> rows(deltas.size() * sizes.size());
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    std::optional<SectorSolver> solver;
    std::string setup_error;
    try {
      solver.emplace(Sector::canonical(sizes[l]), opts.dimension_cap);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    parallel_for(deltas.size(), o.jobs, [&](std::size_t d) {
      ScanRow& row = rows[d * sizes.size() + l];
      if (!solver) {
        row.sites = sizes[l];
        row.n_up = (sizes[l] + 1) / 2;
        row.delta = deltas[d];
        row.error = setup_error;
        return;
      }
      row = scan_point(*solver, deltas[d], opts, cache ? &*cache : nullptr);
    });
  }
  emit(scan_table(rows), make_config("scan-ed", o));
  const bool failed = std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.ok(); });
  for (const auto& r : rows) {
    if (!r.ok()) std::cerr << "L=" << r.sites << " delta=" << r.delta << ": " << r.error << "\n";
  }
  return failed ? kExitSolver : kExitOk;
}

int cmd_xx_diff(const Options& o) {
  require_backend(o, {"ff"});
  const auto ns = parse_int_range(o.particles);
  if (*std::min_element(ns.begin(), ns.end()) < 1) throw UsageError("N must be at least 1");
  std::vector<XxDiffRow> rows(ns.size());
  parallel_for(ns.size(), o.jobs, [&](std::size_t i) {
    const int n = ns[i];
    rows[i] = {n, 2 * n + 1, xx_entropy_difference(n), w_log_det(n)};
  });
  emit(xx_diff_table(rows), make_config("xx-diff", o));
  return kExitOk;
}

int cmd_fig2c(const Options& o) {
  require_backend(o, {"both", "ed", "imps"});
  const auto deltas = o.delta.empty() ? default_delta_grid(20) : parse_delta_spec(o.delta);
  const auto sizes = parse_int_range(o.sizes);
  for (int L : sizes) {
    if (L % 2 == 0 || L < 5) throw UsageError("fig2c fits odd L >= 5 only");
  }
  const auto cache = env_cache();
  BCurveOptions opts;
  opts.solver = solver_options(o);
  opts.jobs = o.jobs;
  opts.cache = cache ? &*cache : nullptr;

  std::vector<Fig2cRow> rows(deltas.size());
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    rows[d].delta = deltas[d];
    rows[d].ed.error = rows[d].imps.error = "not requested";
  }
  if (o.backend != "imps") {
    const auto ed = b_curve(deltas, sizes, EntropySource::kExactDiagonalization, opts);
    for (std::size_t d = 0; d < deltas.size(); ++d) rows[d].ed = ed[d];
  }
  if (o.backend != "ed") {
    const auto imps = b_curve(deltas, sizes, EntropySource::kImps, opts);
    for (std::size_t d = 0; d < deltas.size(); ++d) rows[d].imps = imps[d];
  }
  emit(fig2c_table(rows), make_config("fig2c", o));
  bool failed = false;
  for (const auto& r : rows) {
    for (const auto* b : {&r.ed, &r.imps}) {
      if (b->ok() || b->error == "not requested") continue;
      std::cerr << "delta=" << r.delta << ": " << b->error << "\n";
      if (is_critical(r.delta)) failed = true;
    }
  }
  return failed ? kExitSolver : kExitOk;
}

int cmd_imps_scan(const Options& o) {
  require_backend(o, {"imps"});
  const auto deltas = parse_delta_spec(o.delta);
  const auto sizes = parse_int_range(o.sizes);
  for (double d : deltas) {
    if (!is_critical(d)) throw UsageError("imps-scan needs delta in (-1, 1]");
  }
  for (int L : sizes) {
    if (L < 3) throw UsageError("L must be at least 3");
  }
  std::vector<ImpsRow> rows(deltas.size() * sizes.size());
  parallel_for(rows.size(), o.jobs, [&](std::size_t i) {
    const double d = deltas[i / sizes.size()];
    const int L = sizes[i % sizes.size()];
    const double a = alpha_from_delta(d);
    rows[i] = {a, d, L, imps_min_entropy(a, L)};
  });
  emit(imps_table(rows), make_config("imps-scan", o));
  return kExitOk;
}

int cmd_coulomb(const Options& o) {
  const auto sizes = parse_int_range(o.sizes);
  const int lo = *std::min_element(sizes.begin(), sizes.end());
  const int hi = *std::max_element(sizes.begin(), sizes.end());
  if (lo < 2) throw UsageError("coulomb needs L >= 2");
  const auto rows = coulomb_table(lo, hi);
  emit(coulomb_report(rows), make_config("coulomb", o));
  const double tol = o.tol > 0.0 ? o.tol : 1e-10;
  const bool failed =
      std::any_of(rows.begin(), rows.end(), [&](const CoulombRow& r) { return !(r.rel_err <= tol); });
  return failed ? kExitCheckFailed : kExitOk;
}

int cmd_verify(const Options& o) {
  VerifyOptions v;
  v.filter = o.filter;
  v.inject_fault = o.inject_fault;
  v.jobs = o.jobs;
  int failed = 0;
  int total = 0;
  run_checks(v, [&](const CheckResult& r) {
    ++total;
    if (!r.passed) ++failed;
    std::printf("%-4s %-36s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id().c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%d/%d checks passed\n", total - failed, total);
  return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Min-entropy of the periodic XXZ chain across size parities"};
  app.set_version_flag("--version", std::string(ODDITY_VERSION));
  app.require_subcommand(1);
  Options so, xo, fo, io, co, vo;

  auto common_out = [&](CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "Output path, '-' for stdout");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto solver_flags = [&](CLI::App* sub, Options& o) {
    sub->add_option("--tol", o.tol, "Lanczos residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--xy-sign", o.xy_sign, "Sign of the hopping term: minus or plus")
        ->check(CLI::IsMember({"minus", "plus"}));
  };

  auto* scan = app.add_subcommand("scan-ed", "Ground-state min-entropy by exact diagonalisation");
  scan->add_option("--delta", so.delta, "v, a:b:n or a comma list")->required();
  scan->add_option("--L", so.sizes, "a:b:step, a:b or a comma list")->required();
  scan->add_option("--backend", so.backend, "ed")->default_val("ed");
  common_out(scan, so);
  solver_flags(scan, so);

  auto* xx = app.add_subcommand("xx-diff", "Odd minus even entropy at delta = 0 over N");
  xx->add_option("--N", xo.particles, "a:b")->required();
  xx->add_option("--backend", xo.backend, "ff")->default_val("ff");
  common_out(xx, xo);

  auto* fig = app.add_subcommand("fig2c", "Log coefficient b(delta) from ED and ansatz fits");
  fig->add_option("--delta", fo.delta, "Grid; default 20 points on (-1, 1]");
  fig->add_option("--L", fo.sizes, "Odd sizes")->default_val("7:19:2");
  fig->add_option("--backend", fo.backend, "both, ed or imps")->default_val("both");
  common_out(fig, fo);
  solver_flags(fig, fo);

  auto* imps = app.add_subcommand("imps-scan", "Ansatz min-entropy");
  imps->add_option("--delta", io.delta, "v, a:b:n or a comma list")->required();
  imps->add_option("--L", io.sizes, "a:b:step, a:b or a comma list")->required();
  imps->add_option("--backend", io.backend, "imps")->default_val("imps");
  common_out(imps, io);

  auto* coul = app.add_subcommand("coulomb", "Closed-form vs enumerated Coulomb gas sums");
  coul->add_option("--L", co.sizes, "Size range")->default_val("2:12");
  coul->add_option("--tol", co.tol, "Relative tolerance for the exit status")->check(CLI::PositiveNumber);
  common_out(coul, co);

  auto* ver = app.add_subcommand("verify", "Invariant and oracle suite");
  ver->add_option("--filter", vo.filter, "Groups or check ids, comma separated");
  ver->add_option("--inject-fault", vo.inject_fault, "Perturb the named checks (test hook)");
  ver->add_option("--jobs", vo.jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*scan) return cmd_scan_ed(so);
    if (*xx) return cmd_xx_diff(xo);
    if (*fig) return cmd_fig2c(fo);
    if (*imps) return cmd_imps_scan(io);
    if (*coul) return cmd_coulomb(co);
    if (*ver) return cmd_verify(vo);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const SizingError& e) {
    std::cerr << "sizing error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
