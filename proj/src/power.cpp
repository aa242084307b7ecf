#include "ecft/power.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "ecft/csv.hpp"
#include "ecft/errors.hpp"
#include "ecft/parallel.hpp"
#include "ecft/version.hpp"

namespace ecft {

Seed power_replicate_seed(const Seed& root, const DistributionSpec& spec, std::size_t n, TestId test,
                          std::size_t replicate) {
    return root.derive(hash_tag("power"))
        .derive(hash_tag(spec.to_string()))
        .derive({n, static_cast<std::uint64_t>(test), replicate});
}

PowerCell power_cell(const DistributionSpec& spec, std::size_t n, TestId test, const RejectionRegion& region,
                     std::size_t m, const Seed& seed, unsigned threads) {
    if (region.test != test || region.n != n) {
        throw ConfigurationError("region calibrated for (" + std::string(to_string(region.test)) + ", n=" +
                                 std::to_string(region.n) + ") applied to (" + std::string(to_string(test)) +
                                 ", n=" + std::to_string(n) + ")");
    }
    if (m == 0) throw ArgumentError("power cell needs m >= 1");
    check_sample_size(test, n);

    std::vector<std::uint8_t> rejected(m, 0);
    parallel_for(m, threads, [&](std::size_t i) {
        std::vector<double> x(n);
        Rng rng(power_replicate_seed(seed, spec, n, test, i));
        fill(spec, rng, x);
        rejected[i] = region.rejects(statistic(test, x, region.divisor)) ? 1 : 0;
    });

    PowerCell cell;
    cell.distribution = spec;
    cell.n = n;
    cell.test = test;
    cell.m = m;
    cell.rejections = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1));
    cell.proportion = static_cast<double>(cell.rejections) / static_cast<double>(m);
    cell.seed = seed.root();
    return cell;
}

StudyConfig paper_study(std::size_t m, Seed seed) {
    StudyConfig c;
    c.distributions = {
        DistributionSpec::uniform01(),
        DistributionSpec::laplace(),
        DistributionSpec::logistic(),
        DistributionSpec::lognormal(),
        DistributionSpec::weibull(0.5, 1.0),
        DistributionSpec::chi_squared(10.0),
        DistributionSpec::student_t(4.0),
        DistributionSpec::student_t(10.0),
        DistributionSpec::student_t(15.0),
        DistributionSpec::normal_mixture(2.0, 0.2),
        DistributionSpec::normal_mixture(0.5, 0.2),
    };
    c.ns = {15, 30, 100, 250, 500};
    c.tests.assign(std::begin(kAllTests), std::end(kAllTests));
    c.alpha = 0.05;
    c.m = m;
    c.seed = seed;
    return c;
}

const PowerCell* PowerTable::find(const DistributionSpec& spec, std::size_t n, TestId test) const {
    for (const auto& c : cells) {
        if (c.distribution == spec && c.n == n && c.test == test) return &c;
    }
    return nullptr;
}

namespace {

const RejectionRegion* lookup(std::span<const RejectionRegion> regions, TestId test, std::size_t n, double alpha) {
    for (const auto& r : regions) {
        if (r.test == test && r.n == n && r.alpha == alpha) return &r;
    }
    return nullptr;
}

}  // namespace

std::vector<std::pair<TestId, std::size_t>> uncovered(const StudyConfig& config,
                                                     std::span<const RejectionRegion> regions) {
    std::vector<std::pair<TestId, std::size_t>> missing;
    for (std::size_t n : config.ns) {
        for (auto test : config.tests) {
            if (lookup(regions, test, n, config.alpha) == nullptr) missing.emplace_back(test, n);
        }
    }
    return missing;
}

PowerTable run_study(const StudyConfig& config, std::span<const RejectionRegion> regions) {
    if (auto missing = uncovered(config, regions); !missing.empty()) {
        std::string msg = "calibration does not cover:";
        for (const auto& [test, n] : missing) msg += " (" + std::string(to_string(test)) + ", n=" + std::to_string(n) + ")";
        throw ConfigurationError(msg);
    }

    std::map<std::pair<TestId, std::size_t>, const RejectionRegion*> chosen;
    std::optional<CalibrationProvenance> provenance;
    for (std::size_t n : config.ns) {
        for (auto test : config.tests) {
            const auto* r = lookup(regions, test, n, config.alpha);
            const CalibrationProvenance p{r->alpha, r->m, r->seed, r->divisor};
            if (!provenance) {
                provenance = p;
            } else if (provenance->m != p.m || provenance->seed != p.seed || provenance->divisor != p.divisor) {
                throw ConfigurationError("regions of a study must share one calibration configuration");
            }
            chosen[{test, n}] = r;
        }
    }

    PowerTable table;
    table.alpha = config.alpha;
    table.m = config.m;
    table.seed = config.seed.root();
    if (provenance) table.calibration = *provenance;
    for (const auto& spec : config.distributions) {
        for (std::size_t n : config.ns) {
            for (auto test : config.tests) {
                table.cells.push_back(power_cell(spec, n, test, *chosen.at({test, n}), config.m, config.seed,
                                                 config.threads));
            }
        }
    }
    return table;
}

void write_csv(std::ostream& out, const PowerTable& table) {
    CsvWriter csv(out);
    csv.row({"distribution", "n", "test", "proportion", "m", "seed"});
    for (const auto& c : table.cells) {
        csv.row({c.distribution.to_string(), std::to_string(c.n), to_string(c.test), format_double(c.proportion),
                 std::to_string(c.m), std::to_string(c.seed)});
    }
}

nlohmann::json to_json(const PowerTable& table) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : table.cells) {
        cells.push_back({
            {"distribution", c.distribution.to_string()},
            {"n", c.n},
            {"test", std::string(to_string(c.test))},
            {"rejections", c.rejections},
            {"m", c.m},
            {"proportion", c.proportion},
            {"seed", c.seed},
        });
    }
    return {
        {"toolkit_version", kToolkitVersion},
        {"alpha", table.alpha},
        {"m", table.m},
        {"seed", table.seed},
        {"calibration",
         {{"alpha", table.calibration.alpha},
          {"m", table.calibration.m},
          {"seed", table.calibration.seed},
          {"convention", std::string(to_string(table.calibration.divisor))}}},
        {"cells", cells},
    };
}

}  // namespace ecft
