#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <numbers>

#include <gtest/gtest.h>

#include "oddity/errors.hpp"
#include "oddity/scaling.hpp"

using namespace oddity;

namespace {

std::vector<ScalingPoint> model(double a, double b, double c, double noise = 0.0) {
  std::vector<ScalingPoint> pts;
  for (int L = 5; L <= 31; L += 2) {
    const double x = L;
    pts.push_back({x, a * x + b * std::log(x) + c + noise * std::cos(3 * x)});
  }
  return pts;
}

}  // namespace

TEST(Fit, RecoversExactModel) {
  const ScalingFit f = fit_scaling(model(0.3, 0.25, 0.1));
  EXPECT_NEAR(f.a, 0.3, 1e-10);
  EXPECT_NEAR(f.b, 0.25, 1e-10);
  EXPECT_NEAR(f.c, 0.1, 1e-10);
  EXPECT_LT(f.rss, 1e-20);
  EXPECT_EQ(f.points.size(), 14u);
}

TEST(Fit, Idempotent) {
  const ScalingFit f = fit_scaling(model(0.2, 0.4, -1.0, 1e-3));
  std::vector<ScalingPoint> again;
  for (const auto& p : f.points) again.push_back({p.sites, f.predict(p.sites)});
  const ScalingFit g = fit_scaling(again);
  EXPECT_NEAR(g.a, f.a, 1e-12);
  EXPECT_NEAR(g.b, f.b, 1e-12);
  EXPECT_NEAR(g.c, f.c, 1e-12);
}

TEST(Fit, Equivariant) {
  const auto base = model(0.2, 0.4, -1.0, 1e-3);
  const ScalingFit f = fit_scaling(base);
  auto shifted = base;
  for (auto& p : shifted) p.entropy += 0.5;
  const ScalingFit g = fit_scaling(shifted);
  EXPECT_NEAR(g.a, f.a, 1e-12);
  EXPECT_NEAR(g.b, f.b, 1e-12);
  EXPECT_NEAR(g.c - f.c, 0.5, 1e-12);
  auto tilted = base;
  for (auto& p : tilted) p.entropy += 0.03 * p.sites;
  const ScalingFit h = fit_scaling(tilted);
  EXPECT_NEAR(h.a - f.a, 0.03, 1e-12);
  EXPECT_NEAR(h.b, f.b, 1e-12);
  EXPECT_NEAR(h.c, f.c, 1e-12);
}

TEST(Fit, StandardErrorsMatchNormalEquations) {
  const auto pts = model(0.1, 0.3, 0.2, 1e-2);
  const ScalingFit f = fit_scaling(pts);
  Eigen::MatrixXd x(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) << pts[i].sites, std::log(pts[i].sites), 1.0;
  }
  const Eigen::Matrix3d cov = (x.transpose() * x).inverse() * (f.rss / (pts.size() - 3.0));
  EXPECT_NEAR(f.stderr_a, std::sqrt(cov(0, 0)), 1e-6 * f.stderr_a);
  EXPECT_NEAR(f.stderr_b, std::sqrt(cov(1, 1)), 1e-6 * f.stderr_b);
  EXPECT_NEAR(f.stderr_c, std::sqrt(cov(2, 2)), 1e-6 * f.stderr_c);
  EXPECT_GE(f.stderr_b, 0.0);
}

TEST(Fit, RejectsTooFewSizes) {
  std::vector<ScalingPoint> three{{5, 1}, {7, 2}, {9, 3}};
  EXPECT_THROW(fit_scaling(three), FitError);
  std::vector<ScalingPoint> repeated{{5, 1}, {5, 1.1}, {7, 2}, {7, 2.1}};
  EXPECT_THROW(fit_scaling(repeated), FitError);
  std::vector<ScalingPoint> bad{{0, 1}, {5, 1}, {7, 2}, {9, 3}};
  EXPECT_THROW(fit_scaling(bad), FitError);
}

TEST(Conversions, Examples) {
  EXPECT_NEAR(alpha_from_delta(0.0), 0.25, 1e-15);
  EXPECT_NEAR(alpha_from_delta(0.5), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(alpha_from_delta(1.0), 0.5, 1e-15);
  EXPECT_NEAR(alpha_from_delta(-1.0), 0.0, 1e-15);
  EXPECT_THROW(alpha_from_delta(1.01), DomainError);
  EXPECT_THROW(delta_from_alpha(-0.1), DomainError);
  EXPECT_THROW(alpha_from_delta(std::nan("")), DomainError);
}

TEST(Conversions, RoundTrip) {
  for (int k = 0; k <= 1000; ++k) {
    const double a = 0.5 * k / 1000;
    EXPECT_NEAR(alpha_from_delta(delta_from_alpha(a)), a, 1e-14);
  }
}

TEST(Conversions, RadiusAndLuttinger) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(std::pow(radius_from_delta(0.0), 2), 1 / (4 * pi), 1e-15);
  EXPECT_NEAR(std::pow(radius_from_delta(1.0), 2), 1 / (2 * pi), 1e-15);
  EXPECT_EQ(radius_from_delta(-1.0), 0.0);
  EXPECT_EQ(luttinger_from_radius(0.0), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(luttinger_from_radius(radius_from_delta(0.0)), 1.0, 1e-14);
  EXPECT_NEAR(luttinger_from_radius(radius_from_delta(1.0)), 0.5, 1e-14);
  for (int k = 1; k <= 1000; ++k) {
    const double d = -1 + 2.0 * k / 1000;
    const double r = radius_from_delta(d);
    EXPECT_NEAR(pi * r * r, alpha_from_delta(d), 1e-12);
    // Twice the conformal weight alpha/2.
    EXPECT_NEAR(2 * (pi * r * r / 2), alpha_from_delta(d), 1e-12);
  }
}

TEST(Grid, DefaultTwentyPoints) {
  const auto g = default_delta_grid();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_NEAR(g.front(), -0.9, 1e-15);
  EXPECT_EQ(g.back(), 1.0);
  for (double d : g) EXPECT_TRUE(is_critical(d));
  EXPECT_FALSE(is_critical(-1.0));
  EXPECT_FALSE(is_critical(1.2));
}

TEST(BCurve, FreeFermionPointNearQuarter) {
  const std::vector<double> deltas{0.0};
  const std::vector<int> sizes{7, 9, 11, 13, 15, 17, 19};
  const auto rows = b_curve(deltas, sizes, EntropySource::kExactDiagonalization);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].ok()) << rows[0].error;
  EXPECT_NEAR(rows[0].b, 0.25, 0.05);
  EXPECT_NEAR(rows[0].alpha_theory, 0.25, 1e-15);
  EXPECT_LE(rows[0].stderr_b, 1e-2);
}

TEST(BCurve, NonCriticalPointsAreSkipped) {
  const std::vector<double> deltas{-1.0, 0.0};
  const std::vector<int> sizes{5, 7, 9, 11};
  const auto rows = b_curve(deltas, sizes, EntropySource::kImps);
  EXPECT_FALSE(rows[0].ok());
  EXPECT_NE(rows[0].error.find("non-critical"), std::string::npos);
  EXPECT_TRUE(rows[1].ok());
}

TEST(BCurve, BackendsCoincideAtFreeFermions) {
  const std::vector<double> deltas{0.0};
  const std::vector<int> sizes{5, 7, 9, 11, 13};
  const auto ed = b_curve(deltas, sizes, EntropySource::kExactDiagonalization);
  const auto imps = b_curve(deltas, sizes, EntropySource::kImps);
  EXPECT_NEAR(ed[0].b, imps[0].b, 1e-8);
}

TEST(BCurve, EvenSizesRejected) {
  const std::vector<double> deltas{0.0};
  const std::vector<int> sizes{6, 7, 9, 11};
  EXPECT_THROW(b_curve(deltas, sizes, EntropySource::kImps), DomainError);
}

TEST(Source, Names) {
  EXPECT_EQ(entropy_source_from_string("ed"), EntropySource::kExactDiagonalization);
  EXPECT_EQ(to_string(EntropySource::kImps), "imps");
  EXPECT_THROW(entropy_source_from_string("dmrg"), DomainError);
}
