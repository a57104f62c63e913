#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "support.hpp"
#include "tailsitter/analysis.hpp"

using namespace tailsitter;
using testing_support::kDeg;

namespace {

// Oracle: the level-flight loading written out from the coefficients.
double a_v_direct(double a, double c_l, double c_d) {
  return std::cos(a) / (c_d * std::sin(a) + c_l * std::cos(a));
}

const AeroSpline& synthetic() {
  static const AeroSpline s(testing_support::table_from([](double a) { return 2 * std::sin(a) * std::cos(a); },
                                                        [](double a) { return 0.02 + std::sin(a) * std::sin(a); },
                                                        [](double) { return 0.0; }));
  return s;
}

const AeroSpline& pure_drag() {
  static const AeroSpline s(
      testing_support::table_from([](double) { return 0.0; }, [](double) { return 1.0; }, [](double) { return 0.0; }));
  return s;
}

}  // namespace

TEST(Loading, Values) {
  VehicleParams p;
  EXPECT_EQ(aerodynamic_loading(0.0, p), 0.0);
  EXPECT_NEAR(aerodynamic_loading(10.0, p), 0.6379, 1e-4);
  EXPECT_NEAR(aerodynamic_loading(14.0, p), 4 * aerodynamic_loading(7.0, p), 1e-12);
}

TEST(AvOfAlpha, Values) {
  EXPECT_NEAR(a_v_of_alpha(90 * kDeg, testing_support::naca()), 0.0, 1e-12);
  EXPECT_NEAR(a_v_of_alpha(3.63 * kDeg, testing_support::naca()), 2.5, 0.05);
  const double a = 20 * kDeg;
  EXPECT_NEAR(a_v_of_alpha(a, synthetic()), a_v_direct(a, std::sin(2 * a), 0.02 + std::sin(a) * std::sin(a)), 1e-12);
}

TEST(FindEquilibria, Hover) {
  const auto r = find_equilibria(0.0, testing_support::naca());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 90 * kDeg, 1e-6);
}

TEST(FindEquilibria, TripleRoot) {
  const auto r = find_equilibria(2.5, testing_support::naca());
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0] / kDeg, 3.63, 0.5);
  EXPECT_NEAR(r[1] / kDeg, 12.8, 0.5);
  EXPECT_NEAR(r[2] / kDeg, 17.4, 0.5);
  for (double a : r) EXPECT_NEAR(a_v_of_alpha(a, testing_support::naca()), 2.5, 1e-5);
}

TEST(FindEquilibria, SingleRootAboveUpperFold) {
  const auto r = find_equilibria(5.0, testing_support::naca());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LT(r[0] / kDeg, 10.0);
}

TEST(StabilityClassify, Naca) {
  EXPECT_TRUE(stability_classify(3.63 * kDeg, testing_support::naca()).stable);
  EXPECT_FALSE(stability_classify(12.8 * kDeg, testing_support::naca()).stable);
}

TEST(StabilityClassify, PureDrag) {
  const auto e = stability_classify(30 * kDeg, pure_drag());
  EXPECT_NEAR(e.p, 3.0, 1e-9);
  EXPECT_NEAR(e.q, 1.0, 1e-9);
  EXPECT_TRUE(e.stable);
}

TEST(StabilityMatrix, TraceAndDeterminant) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> a(0.5 * kDeg, 90 * kDeg);
  for (int i = 0; i < 200; ++i) {
    const double al = a(rng);
    const auto m = stability_matrix(al, testing_support::naca());
    const auto e = stability_classify(al, testing_support::naca());
    EXPECT_NEAR(m.trace(), -e.p, 1e-12);
    EXPECT_NEAR(m.determinant(), 2 * e.q, 1e-12);
  }
}

TEST(StabilityMatrix, PureDragEigenvalues) {
  const auto m = stability_matrix(10 * kDeg, pure_drag());
  EXPECT_TRUE(m.isApprox((Matrix2() << -2, 0, 0, -1).finished(), 1e-9));
  auto ev = eigenvalues(m);
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return x.real() < y.real(); });
  EXPECT_NEAR(ev[0].real(), -2, 1e-9);
  EXPECT_NEAR(ev[1].real(), -1, 1e-9);
  EXPECT_TRUE(eigen_stable(m));
}

TEST(StabilityMatrix, StallRootUnstable) {
  const auto m = stability_matrix(12.8 * kDeg, testing_support::naca());
  const auto ev = eigenvalues(m);
  EXPECT_GT(std::max(ev[0].real(), ev[1].real()), 0.0);
  EXPECT_FALSE(eigen_stable(m));
}

TEST(LinearizationOracle, ZeroLiftIsNegativeDefinite) {
  const Matrix2 j = linearization_oracle(Vec2(8, 1), 0.4, VehicleParams{}, pure_drag());
  EXPECT_NEAR(j(0, 1), j(1, 0), 1e-6 * j.norm());
  const Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (j + j.transpose()));
  EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
}

TEST(LinearizationOracle, HomogeneousDegreeOne) {
  const VehicleParams p;
  const Matrix2 a = linearization_oracle(Vec2(10, 0), 0.1, p, testing_support::naca());
  const Matrix2 b = linearization_oracle(Vec2(20, 0), 0.1, p, testing_support::naca());
  EXPECT_TRUE(b.isApprox(2 * a, 1e-5));
}

TEST(LinearizationOracle, AgreesWithRouthHurwitz) {
  const auto& s = testing_support::naca();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pick(0.05, 8.0);
  int compared = 0;
  for (int i = 0; i < 50; ++i) {
    const double a_v = pick(rng);
    const double v = std::sqrt(a_v * VehicleParams{}.weight() / (0.5 * 1.225 * VehicleParams{}.s_wing()));
    for (double alpha : find_equilibria(a_v, s)) {
      const auto e = stability_classify(alpha, s);
      if (std::abs(e.p) <= 1e-3 || std::abs(e.q) <= 1e-3) continue;
      EXPECT_EQ(eigen_stable(linearization_oracle(Vec2(v, 0), alpha, VehicleParams{}, s)), e.stable) << alpha;
      ++compared;
    }
  }
  EXPECT_GE(compared, 50);
}

TEST(Bifurcation, NacaFolds) {
  const auto d = bifurcation_scan(0.0, 8.0, 0.01, testing_support::naca());
  ASSERT_EQ(d.folds.size(), 2u);
  EXPECT_NEAR(d.folds[0], 1.18, 0.1);
  EXPECT_NEAR(d.folds[1], 3.82, 0.1);
  for (const auto& sl : d.slices) {
    if (sl.a_v < 1.0) EXPECT_EQ(sl.equilibria.size(), 1u) << sl.a_v;
  }
}

TEST(Bifurcation, FlatPlateMatchesBruteForce) {
  const auto& s = testing_support::flat_plate();
  // Brute force: local extrema of a_v(alpha) on a dense grid are the folds.
  std::vector<double> extrema;
  double prev2 = a_v_of_alpha(0.01 * kDeg, s), prev = a_v_of_alpha(0.02 * kDeg, s);
  for (double deg = 0.03; deg <= 90.0; deg += 0.01) {
    const double cur = a_v_of_alpha(deg * kDeg, s);
    if ((prev - prev2) * (cur - prev) < 0) extrema.push_back(prev);
    prev2 = prev;
    prev = cur;
  }
  std::sort(extrema.begin(), extrema.end());
  const auto d = bifurcation_scan(0.0, 8.0, 0.01, s);
  ASSERT_EQ(d.folds.size(), extrema.size());
  for (std::size_t i = 0; i < extrema.size(); ++i) EXPECT_NEAR(d.folds[i], extrema[i], 1e-3);
}

TEST(Bifurcation, NoStallNoFolds) {
  const auto d = bifurcation_scan(0.0, 8.0, 0.01, synthetic());
  EXPECT_TRUE(d.folds.empty());
}

TEST(Trim, MatchesAnalyticCurveWithoutPropWash) {
  const VehicleParams p;
  const auto& s = testing_support::naca();
  for (double v : {20.0, 28.0}) {
    const auto t = trim_solve(v, 0.0, 0.0, p, s);
    ASSERT_TRUE(t.converged) << v;
    const auto roots = find_equilibria(aerodynamic_loading(v, p), s);
    double best = 1e9;
    for (double r : roots) best = std::min(best, std::abs(r - t.alpha_e_eq));
    EXPECT_LT(best / kDeg, 0.2) << v;
  }
}

TEST(Trim, HoverLimit) {
  const VehicleParams p;
  const auto t = trim_solve(0.05, 0.0, 0.0, p, testing_support::naca());
  ASSERT_TRUE(t.converged);
  EXPECT_NEAR(t.theta_eq / kDeg, 90.0, 0.5);
  EXPECT_NEAR(t.collective_eq, p.weight(), 1e-3);
}

TEST(Trim, PropWashLowersEffectiveAoa) {
  VehicleParams p0, p1;
  p1.eta = 1.0;
  const auto a = trim_solve(5.0, 0.0, 0.0, p0, testing_support::naca());
  const auto b = trim_solve(5.0, 0.0, 1.0, p1, testing_support::naca());
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_LT(b.alpha_e_eq, a.alpha_e_eq);
}

TEST(Sweep, DefaultGridSize) {
  const auto o = SweepOptions::defaults();
  EXPECT_EQ(o.speeds.size() * o.etas.size(), 630u);
}
