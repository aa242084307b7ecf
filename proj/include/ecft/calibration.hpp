#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ecft/classic_tests.hpp"
#include "ecft/ecf.hpp"
#include "ecft/random.hpp"

namespace ecft {

enum class RegionKind : std::uint8_t { TwoSided, UpperTail, LowerTail };

[[nodiscard]] std::string_view to_string(RegionKind kind) noexcept;
[[nodiscard]] RegionKind parse_region_kind(std::string_view text);

/**
 * Calibrated decision rule for one (test, n, alpha).
 *
 * TwoSided rejects outside [lower, upper]; UpperTail rejects above `upper`;
 * LowerTail rejects below `lower`. The unused bound of a one-sided region is
 * infinite.
 */
struct RejectionRegion {
    TestId test = TestId::ECFT;
    std::size_t n = 0;
    double alpha = 0.05;
    RegionKind kind = RegionKind::TwoSided;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    Divisor divisor = Divisor::Unbiased;

    [[nodiscard]] bool rejects(double statistic) const noexcept;

    friend bool operator==(const RejectionRegion&, const RejectionRegion&) = default;
};

/// Monte Carlo null statistics for one test and sample size.
struct NullSampleSet {
    TestId test = TestId::ECFT;
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    Divisor divisor = Divisor::Unbiased;
    std::vector<double> values;  // in replicate order
};

struct SimulationOptions {
    Divisor divisor = Divisor::Unbiased;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Stream for null replicate i of sample size n. Shared by every test, so
/// statistics simulated together or separately see identical samples.
[[nodiscard]] Seed null_replicate_seed(const Seed& root, std::size_t n, std::size_t replicate);

/// m statistics of independent N(0,1) samples of size n. Requires m ≥ 1000.
[[nodiscard]] NullSampleSet simulate_null(TestId test, std::size_t n, std::size_t m, const Seed& seed,
                                          const SimulationOptions& options = {});

/// One NullSampleSet per test, all computed on the same replicate samples.
[[nodiscard]] std::vector<NullSampleSet> simulate_null(std::span<const TestId> tests, std::size_t n, std::size_t m,
                                                       const Seed& seed, const SimulationOptions& options = {});

/**
 * Empirical quantile of sorted data: with h = p(m + 1), interpolate linearly
 * between the order statistics x_(⌊h⌋) and x_(⌊h⌋+1), clamping to x_(1) and
 * x_(m) outside [1, m].
 */
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double p);

/// Quantiles of the set at each probability in `probs` (each in (0, 1)).
[[nodiscard]] std::vector<double> percentiles(const NullSampleSet& set, std::span<const double> probs);

/// Rejection region from an existing null set.
[[nodiscard]] RejectionRegion region_from_null(const NullSampleSet& set, double alpha);

/// Requires alpha in (0, 0.5] and m ≥ 10⁴.
[[nodiscard]] RejectionRegion calibrate(TestId test, std::size_t n, double alpha, std::size_t m, const Seed& seed,
                                        const SimulationOptions& options = {});

/// Regions for every (test, n) pair; tests at the same n share replicates.
[[nodiscard]] std::vector<RejectionRegion> calibrate_grid(std::span<const TestId> tests,
                                                          std::span<const std::size_t> ns, double alpha,
                                                          std::size_t m, const Seed& seed,
                                                          const SimulationOptions& options = {});

struct VariancePoint {
    std::size_t n = 0;
    double mc_variance = 0.0;
    double asymptotic_variance = 0.0;
};

/// MC variance of v_n against (cosh(1) - 3/2)/n for each n.
[[nodiscard]] std::vector<VariancePoint> null_variance_curve(std::span<const std::size_t> ns, std::size_t m,
                                                             const Seed& seed, const SimulationOptions& options = {});

struct IntervalPoint {
    std::size_t n = 0;
    double simulated_lower = 0.0;
    double simulated_upper = 0.0;
    double asymptotic_lower = 0.0;
    double asymptotic_upper = 0.0;
};

/// Simulated central interval of v_n at `level` against ±z·√((cosh(1) - 3/2)/n).
[[nodiscard]] std::vector<IntervalPoint> ci_comparison(std::span<const std::size_t> ns, std::size_t m, double level,
                                                       const Seed& seed, const SimulationOptions& options = {});

}  // namespace ecft
