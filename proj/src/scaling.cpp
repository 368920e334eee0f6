#include "oddity/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "oddity/errors.hpp"
#include "oddity/imps.hpp"
#include "oddity/parallel.hpp"

namespace oddity {

double ScalingFit::predict(double sites) const { return a * sites + b * std::log(sites) + c; }

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.sites > 0.0)) throw FitError("fit_scaling: sizes must be positive");
    distinct.insert(p.sites);
  }
  if (distinct.size() < 3) throw FitError("fit_scaling: rank-deficient design, need 3 distinct sizes");
  if (distinct.size() < 4) throw FitError("fit_scaling: need at least 4 distinct sizes");

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    design(i, 0) = p.sites;
    design(i, 1) = std::log(p.sites);
    design(i, 2) = 1.0;
    rhs(i) = p.entropy;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw FitError("fit_scaling: rank-deficient design");
  const Eigen::Vector3d coef = qr.solve(rhs);
  const Eigen::VectorXd resid = rhs - design * coef;

  ScalingFit fit;
  fit.a = coef(0);
  fit.b = coef(1);
  fit.c = coef(2);
  fit.rss = resid.squaredNorm();
  fit.points.assign(points.begin(), points.end());

  // Cov = sigma^2 (R^T R)^{-1}, permuted back to the original columns.
  const Eigen::Matrix3d r =
      qr.matrixQR().topLeftCorner(3, 3).triangularView<Eigen::Upper>();
  const Eigen::Matrix3d r_inv = r.inverse();
  const Eigen::Matrix3d cov_perm = r_inv * r_inv.transpose();
  const Eigen::Matrix3d perm = qr.colsPermutation();
  const Eigen::Matrix3d cov = perm * cov_perm * perm.transpose();
  const double sigma2 = fit.rss / static_cast<double>(n - 3);
  fit.stderr_a = std::sqrt(std::max(0.0, sigma2 * cov(0, 0)));
  fit.stderr_b = std::sqrt(std::max(0.0, sigma2 * cov(1, 1)));
  fit.stderr_c = std::sqrt(std::max(0.0, sigma2 * cov(2, 2)));
  return fit;
}

double alpha_from_delta(double delta) {
  if (!(delta >= -1.0 && delta <= 1.0)) throw DomainError("alpha_from_delta requires delta in [-1, 1]");
  return std::acos(-delta) / (2.0 * std::numbers::pi);
}

double delta_from_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) throw DomainError("delta_from_alpha requires alpha in [0, 1/2]");
  return -std::cos(2.0 * std::numbers::pi * alpha);
}

double radius_from_delta(double delta) {
  if (!(delta >= -1.0 && delta <= 1.0)) throw DomainError("radius_from_delta requires delta in [-1, 1]");
  const double pi = std::numbers::pi;
  const double r2 = 1.0 / (2.0 * pi) - std::acos(delta) / (2.0 * pi * pi);
  return std::sqrt(std::max(0.0, r2));
}

double luttinger_from_radius(double radius) {
  if (radius == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * std::numbers::pi * radius * radius);
}

std::vector<double> default_delta_grid(int points) {
  if (points < 1) throw DomainError("delta grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 1; k <= points; ++k) {
    out[static_cast<std::size_t>(k - 1)] = -1.0 + 2.0 * k / static_cast<double>(points);
  }
  return out;
}

bool is_critical(double delta) { return delta > -1.0 && delta <= 1.0; }

std::string_view to_string(EntropySource source) {
  return source == EntropySource::kExactDiagonalization ? "ed" : "imps";
}

EntropySource entropy_source_from_string(std::string_view text) {
  if (text == "ed") return EntropySource::kExactDiagonalization;
  if (text == "imps") return EntropySource::kImps;
  throw DomainError("entropy source must be 'ed' or 'imps', got '" + std::string(text) + "'");
}

std::vector<BCurveRow> b_curve(std::span<const double> deltas, std::span<const int> sizes,
                               EntropySource source, const BCurveOptions& options) {
  const std::size_t nd = deltas.size();
  std::vector<BCurveRow> rows(nd);
  // entropies[d][l]; NaN marks a failed point.
  std::vector<std::vector<double>> entropies(
      nd, std::vector<double>(sizes.size(), std::numeric_limits<double>::quiet_NaN()));
  std::vector<std::string> errors(nd);

  for (std::size_t d = 0; d < nd; ++d) {
    rows[d].delta = deltas[d];
    if (!is_critical(deltas[d])) {
      errors[d] = "non-critical delta, skipped";
    } else {
      rows[d].alpha_theory = alpha_from_delta(deltas[d]);
    }
  }
  for (int L : sizes) {
    if (L % 2 == 0) throw DomainError("b_curve fits odd sizes only");
  }

  for (std::size_t l = 0; l < sizes.size(); ++l) {
    const int L = sizes[l];
    if (source == EntropySource::kExactDiagonalization) {
      const SectorSolver solver(Sector::canonical(L), options.solver.dimension_cap);
      parallel_for(nd, options.jobs, [&](std::size_t d) {
        if (!errors[d].empty()) return;
        const ScanRow row = scan_point(solver, deltas[d], options.solver, options.cache);
        if (row.ok()) {
          entropies[d][l] = row.s_inf;
        } else {
          errors[d] = "L=" + std::to_string(L) + ": " + row.error;
        }
      });
    } else {
      parallel_for(nd, options.jobs, [&](std::size_t d) {
        if (!errors[d].empty()) return;
        try {
          entropies[d][l] = imps_min_entropy(rows[d].alpha_theory, L);
        } catch (const std::exception& e) {
          errors[d] = "L=" + std::to_string(L) + ": " + e.what();
        }
      });
    }
  }

  for (std::size_t d = 0; d < nd; ++d) {
    if (!errors[d].empty()) {
      rows[d].error = errors[d];
      continue;
    }
    std::vector<ScalingPoint> pts;
    for (std::size_t l = 0; l < sizes.size(); ++l) {
      pts.push_back({static_cast<double>(sizes[l]), entropies[d][l]});
    }
    try {
      const ScalingFit fit = fit_scaling(pts);
      rows[d].b = fit.b;
      rows[d].stderr_b = fit.stderr_b;
    } catch (const std::exception& e) {
      rows[d].error = e.what();
    }
  }
  return rows;
}

}  // namespace oddity
