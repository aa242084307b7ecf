#include "ecft/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ecft/distributions.hpp"
#include "ecft/errors.hpp"
#include "ecft/power.hpp"

namespace ecft {
namespace {

double skewness(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double x : v) {
        m2 += (x - mean) * (x - mean);
        m3 += (x - mean) * (x - mean) * (x - mean);
    }
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

TEST(QuantileTest, OrderStatisticInterpolation) {
    const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0};
    EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.1), 1.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.9), 4.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.3), 1.5);
    EXPECT_THROW((void)quantile_sorted(sorted, 0.0), ArgumentError);
    EXPECT_THROW((void)quantile_sorted(sorted, 1.0), ArgumentError);
    EXPECT_THROW((void)quantile_sorted(std::vector<double>{}, 0.5), ArgumentError);
}

TEST(QuantileTest, MedianOfSymmetricSet) {
    NullSampleSet set;
    set.values = {1.0, -1.0, 0.0};
    const double probs[] = {0.5};
    EXPECT_EQ(percentiles(set, probs).front(), 0.0);
}

TEST(SimulateNullTest, Preconditions) {
    EXPECT_THROW((void)simulate_null(TestId::ECFT, 30, 999, Seed(1)), ArgumentError);
    EXPECT_THROW((void)simulate_null(TestId::SW, 3, 1000, Seed(1)), UnsupportedSizeError);
    EXPECT_THROW((void)simulate_null(TestId::DP, 7, 1000, Seed(1)), UnsupportedSizeError);
}

TEST(SimulateNullTest, IndependentOfWorkerCount) {
    const auto serial = simulate_null(kAllTests, 30, 3000, Seed(9), {Divisor::Unbiased, 1});
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto parallel = simulate_null(kAllTests, 30, 3000, Seed(9), {Divisor::Unbiased, threads});
        ASSERT_EQ(parallel.size(), serial.size());
        for (std::size_t k = 0; k < serial.size(); ++k) EXPECT_EQ(parallel[k].values, serial[k].values);
    }
}

TEST(SimulateNullTest, JointAndSeparateRunsAgree) {
    const auto joint = simulate_null(kAllTests, 25, 1000, Seed(10));
    for (const auto& set : joint) {
        EXPECT_EQ(simulate_null(set.test, 25, 1000, Seed(10)).values, set.values) << to_string(set.test);
    }
}

TEST(SimulateNullTest, RecordsMetadata) {
    const auto set = simulate_null(TestId::ECFT, 30, 1000, Seed(12), {Divisor::ML, 0});
    EXPECT_EQ(set.n, 30u);
    EXPECT_EQ(set.m, 1000u);
    EXPECT_EQ(set.seed, 12u);
    EXPECT_EQ(set.divisor, Divisor::ML);
    EXPECT_TRUE(std::all_of(set.values.begin(), set.values.end(), [](double v) { return std::isfinite(v); }));
}

TEST(SimulateNullTest, SmallSamplesAreRightSkewed) {
    const auto set = simulate_null(TestId::ECFT, 30, 100000, Seed(42));
    const double probs[] = {0.025, 0.5, 0.975};
    const auto q = percentiles(set, probs);
    EXPECT_GT(q[2] - q[1], q[1] - q[0]);
}

TEST(SimulateNullTest, SkewnessShrinksWithSampleSize) {
    const double small = skewness(simulate_null(TestId::ECFT, 30, 100000, Seed(42)).values);
    const double large = skewness(simulate_null(TestId::ECFT, 1000, 100000, Seed(42)).values);
    EXPECT_GT(small, 0.9);
    EXPECT_GT(large, 0.0);
    EXPECT_LT(large, small / 4.0);
}

TEST(CalibrateTest, TableRowsForEcft) {
    const double probs[] = {0.025, 0.975};
    const auto q100 = percentiles(simulate_null(TestId::ECFT, 100, 100000, Seed(42)), probs);
    EXPECT_NEAR(q100[0], -0.0295, 0.005);
    EXPECT_NEAR(q100[1], 0.0480, 0.005);

    const auto r15 = calibrate(TestId::ECFT, 15, 0.05, 100000, Seed(42));
    EXPECT_EQ(r15.kind, RegionKind::TwoSided);
    EXPECT_NEAR(r15.lower, -0.0284, 0.006);
    EXPECT_NEAR(r15.upper, 0.1138, 0.006);
}

TEST(CalibrateTest, EcftRegionStraddlesZero) {
    for (std::size_t n : {15u, 30u, 50u, 250u}) {
        const auto r = calibrate(TestId::ECFT, n, 0.05, 10000, Seed(3));
        EXPECT_LT(r.lower, 0.0) << n;
        EXPECT_GT(r.upper, 0.0) << n;
    }
}

TEST(CalibrateTest, RegionKindsFollowDirection) {
    const std::size_t ns[] = {30};
    const auto regions = calibrate_grid(kAllTests, ns, 0.05, 10000, Seed(5));
    ASSERT_EQ(regions.size(), 6u);
    for (const auto& r : regions) {
        switch (direction(r.test)) {
            case Direction::TwoSided:
                EXPECT_EQ(r.kind, RegionKind::TwoSided);
                EXPECT_LT(r.lower, r.upper);
                break;
            case Direction::Upper:
                EXPECT_EQ(r.kind, RegionKind::UpperTail);
                EXPECT_TRUE(std::isinf(r.lower));
                EXPECT_TRUE(r.rejects(r.upper + 1.0));
                EXPECT_FALSE(r.rejects(r.upper - 1e-9));
                break;
            case Direction::Lower:
                EXPECT_EQ(r.kind, RegionKind::LowerTail);
                EXPECT_TRUE(std::isinf(r.upper));
                EXPECT_TRUE(r.rejects(r.lower - 1e-9));
                EXPECT_FALSE(r.rejects(r.lower + 1e-9));
                break;
        }
        EXPECT_EQ(r.n, 30u);
        EXPECT_EQ(r.m, 10000u);
        EXPECT_EQ(r.seed, 5u);
    }
}

TEST(CalibrateTest, Preconditions) {
    EXPECT_THROW((void)calibrate(TestId::ECFT, 30, 0.6, 10000, Seed(1)), ArgumentError);
    EXPECT_THROW((void)calibrate(TestId::ECFT, 30, 0.0, 10000, Seed(1)), ArgumentError);
    EXPECT_THROW((void)calibrate(TestId::ECFT, 30, 0.05, 9999, Seed(1)), ArgumentError);
    EXPECT_THROW((void)calibrate(TestId::DP, 7, 0.05, 10000, Seed(1)), UnsupportedSizeError);
}

TEST(CalibrateTest, PureFunctionOfArguments) {
    EXPECT_EQ(calibrate(TestId::AD, 40, 0.05, 10000, Seed(77), {Divisor::Unbiased, 1}),
              calibrate(TestId::AD, 40, 0.05, 10000, Seed(77), {Divisor::Unbiased, 4}));
}

TEST(CalibrateTest, JarqueBeraSizeOnFreshNullData) {
    const auto region = calibrate(TestId::JB, 100, 0.05, 100000, Seed(42));
    const auto cell = power_cell(DistributionSpec::normal(), 100, TestId::JB, region, 10000, Seed(4242));
    EXPECT_NEAR(cell.proportion, 0.05, 0.007);
}

TEST(VarianceCurveTest, ApproachesAsymptoticVariance) {
    const std::size_t ns[] = {15, 30, 100, 250, 1000};
    const auto curve = null_variance_curve(ns, 10000, Seed(8));
    ASSERT_EQ(curve.size(), 5u);
    EXPECT_LT(curve.front().mc_variance, curve.front().asymptotic_variance);
    EXPECT_NEAR(curve.back().mc_variance / 4.308063481524378e-5, 1.0, 0.15);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_LT(curve[i].mc_variance, curve[i - 1].mc_variance);
        EXPECT_DOUBLE_EQ(curve[i].asymptotic_variance, asymptotic_variance(curve[i].n));
    }
}

TEST(IntervalTest, SimulatedAgainstNormalApproximation) {
    const std::size_t ns[] = {15, 100, 1000};
    const auto rows = ci_comparison(ns, 20000, 0.95, Seed(6));
    ASSERT_EQ(rows.size(), 3u);
    const auto& small = rows[0];
    const auto& large = rows[2];
    EXPECT_GT(small.simulated_upper, small.asymptotic_upper);
    EXPECT_NEAR(large.simulated_lower / large.asymptotic_lower, 1.0, 0.2);
    EXPECT_NEAR(large.simulated_upper / large.asymptotic_upper, 1.0, 0.2);
    EXPECT_NEAR(large.asymptotic_upper, 1.959963984540054 * std::sqrt(4.308063481524378e-5), 1e-15);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(rows[i].simulated_upper - rows[i].simulated_lower,
                  rows[i - 1].simulated_upper - rows[i - 1].simulated_lower);
        EXPECT_LT(rows[i].asymptotic_upper, rows[i - 1].asymptotic_upper);
    }
    EXPECT_THROW((void)ci_comparison(ns, 1000, 1.0, Seed(6)), ArgumentError);
}

}  // namespace
}  // namespace ecft
