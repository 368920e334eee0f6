#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oddity/ground_state.hpp"

namespace oddity {

struct ScalingPoint {
  double sites = 0.0;
  double entropy = 0.0;
};

/// S(L) = a L + b log L + c by ordinary least squares.
struct ScalingFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double stderr_c = 0.0;
  double rss = 0.0;
  std::vector<ScalingPoint> points;

  double predict(double sites) const;
};

/// Solved by column-pivoted Householder QR on the design {L, log L, 1};
/// standard errors use the unbiased residual variance rss / (n - 3).
/// FitError with fewer than four distinct sizes or a rank-deficient design.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

/// alpha = arccos(-delta) / (2 pi) on [-1, 1]; DomainError outside.
double alpha_from_delta(double delta);
/// delta = -cos(2 pi alpha) on [0, 1/2]; DomainError outside.
double delta_from_alpha(double alpha);

/// R = sqrt(1/(2 pi) - arccos(delta)/(2 pi^2)) for delta in [-1, 1].
double radius_from_delta(double delta);
/// K = 1/(4 pi R^2); +infinity at R = 0.
double luttinger_from_radius(double radius);

/// n points delta_k = -1 + 2k/n, k = 1..n, covering (-1, 1].
std::vector<double> default_delta_grid(int points = 20);

bool is_critical(double delta);

enum class EntropySource { kExactDiagonalization, kImps };
std::string_view to_string(EntropySource source);
EntropySource entropy_source_from_string(std::string_view text);

struct BCurveRow {
  double delta = 0.0;
  double b = 0.0;
  double stderr_b = 0.0;
  double alpha_theory = 0.0;
  /// Non-empty when the point was skipped or failed.
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct BCurveOptions {
  SolverOptions solver{};
  int jobs = 1;
  const ScanCache* cache = nullptr;
};

/// Log coefficient b(delta) from fits of S_inf over odd sizes.
/// Non-critical deltas are reported with an error and skipped.
std::vector<BCurveRow> b_curve(std::span<const double> deltas, std::span<const int> sizes,
                               EntropySource source, const BCurveOptions& options = {});

}  // namespace oddity
