#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "ecft/calibration.hpp"
#include "ecft/distributions.hpp"

namespace ecft {

struct PowerCell {
    DistributionSpec distribution = DistributionSpec::normal();
    std::size_t n = 0;
    TestId test = TestId::ECFT;
    std::size_t rejections = 0;
    std::size_t m = 0;
    double proportion = 0.0;
    std::uint64_t seed = 0;
};

/// Stream for replicate i of a power cell; depends only on (root, distribution, n, test, i).
[[nodiscard]] Seed power_replicate_seed(const Seed& root, const DistributionSpec& spec, std::size_t n, TestId test,
                                        std::size_t replicate);

/// Rejection count over m samples from `spec`. Throws ConfigurationError if
/// the region was calibrated for another (test, n).
[[nodiscard]] PowerCell power_cell(const DistributionSpec& spec, std::size_t n, TestId test,
                                   const RejectionRegion& region, std::size_t m, const Seed& seed,
                                   unsigned threads = 0);

struct StudyConfig {
    std::vector<DistributionSpec> distributions;
    std::vector<std::size_t> ns;
    std::vector<TestId> tests;
    double alpha = 0.05;
    std::size_t m = 10000;
    Seed seed{7};
    unsigned threads = 0;
};

/// The alternatives of the published study, n = 15, 30, 100, 250, 500 and all six tests.
[[nodiscard]] StudyConfig paper_study(std::size_t m = 10000, Seed seed = Seed{7});

/// Calibration settings shared by every region of a study.
struct CalibrationProvenance {
    double alpha = 0.05;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    Divisor divisor = Divisor::Unbiased;
};

struct PowerTable {
    std::vector<PowerCell> cells;  // distribution-major, then n, then test
    double alpha = 0.05;
    CalibrationProvenance calibration;
    std::size_t m = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] const PowerCell* find(const DistributionSpec& spec, std::size_t n, TestId test) const;
};

/// (test, n) pairs of the grid with no region in `regions`.
[[nodiscard]] std::vector<std::pair<TestId, std::size_t>> uncovered(const StudyConfig& config,
                                                                   std::span<const RejectionRegion> regions);

/**
 * Every cell of the grid. Regions must cover each (test, n) and share one
 * calibration configuration (alpha, m, seed, divisor); otherwise throws
 * ConfigurationError naming the problem.
 */
[[nodiscard]] PowerTable run_study(const StudyConfig& config, std::span<const RejectionRegion> regions);

/// CSV with header `distribution,n,test,proportion,m,seed`.
void write_csv(std::ostream& out, const PowerTable& table);

[[nodiscard]] nlohmann::json to_json(const PowerTable& table);

}  // namespace ecft
