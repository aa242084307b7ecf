#include "ecft/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ecft/errors.hpp"
#include "ecft/parallel.hpp"
#include "ecft/special.hpp"

namespace ecft {

namespace {

constexpr std::size_t kMinNullReplicates = 1000;
constexpr std::size_t kMinCalibrationReplicates = 10000;

std::vector<double> sorted_copy(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw ArgumentError("alpha must lie in (0, 0.5], got " + std::to_string(alpha));
    }
}

double sample_variance(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

}  // namespace

std::string_view to_string(RegionKind kind) noexcept {
    switch (kind) {
        case RegionKind::TwoSided: return "two_sided";
        case RegionKind::UpperTail: return "upper_tail";
        case RegionKind::LowerTail: return "lower_tail";
    }
    return "?";
}

RegionKind parse_region_kind(std::string_view text) {
    if (text == "two_sided") return RegionKind::TwoSided;
    if (text == "upper_tail") return RegionKind::UpperTail;
    if (text == "lower_tail") return RegionKind::LowerTail;
    throw ParseError("unknown region kind '" + std::string(text) + "'");
}

bool RejectionRegion::rejects(double statistic) const noexcept {
    switch (kind) {
        case RegionKind::TwoSided: return statistic < lower || statistic > upper;
        case RegionKind::UpperTail: return statistic > upper;
        case RegionKind::LowerTail: return statistic < lower;
    }
    return false;
}

Seed null_replicate_seed(const Seed& root, std::size_t n, std::size_t replicate) {
    return root.derive(hash_tag("null")).derive({n, replicate});
}

std::vector<NullSampleSet> simulate_null(std::span<const TestId> tests, std::size_t n, std::size_t m,
                                         const Seed& seed, const SimulationOptions& options) {
    if (tests.empty()) throw ArgumentError("no tests requested");
    if (m < kMinNullReplicates) {
        throw ArgumentError("null simulation needs m >= " + std::to_string(kMinNullReplicates) + ", got " +
                            std::to_string(m));
    }
    for (auto id : tests) check_sample_size(id, n);

    std::vector<NullSampleSet> sets(tests.size());
    for (std::size_t k = 0; k < tests.size(); ++k) {
        sets[k] = NullSampleSet{tests[k], n, m, seed.root(), options.divisor, std::vector<double>(m)};
    }

    parallel_for(m, options.threads, [&](std::size_t i) {
        std::vector<double> x(n);
        Rng rng(null_replicate_seed(seed, n, i));
        for (auto& v : x) v = rng.normal();
        for (std::size_t k = 0; k < tests.size(); ++k) {
            sets[k].values[i] = statistic(tests[k], x, options.divisor);
        }
    });
    return sets;
}

NullSampleSet simulate_null(TestId test, std::size_t n, std::size_t m, const Seed& seed,
                            const SimulationOptions& options) {
    const TestId one[] = {test};
    return std::move(simulate_null(one, n, m, seed, options).front());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ArgumentError("quantile of an empty set");
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("quantile probability must lie in (0, 1)");
    const double m = static_cast<double>(sorted.size());
    const double h = p * (m + 1.0);
    if (h <= 1.0) return sorted.front();
    if (h >= m) return sorted.back();
    const auto k = static_cast<std::size_t>(std::floor(h));  // 1-based lower order statistic
    const double frac = h - static_cast<double>(k);
    return sorted[k - 1] + frac * (sorted[k] - sorted[k - 1]);
}

std::vector<double> percentiles(const NullSampleSet& set, std::span<const double> probs) {
    const auto sorted = sorted_copy(set.values);
    std::vector<double> out;
    out.reserve(probs.size());
    for (double p : probs) out.push_back(quantile_sorted(sorted, p));
    return out;
}

RejectionRegion region_from_null(const NullSampleSet& set, double alpha) {
    check_alpha(alpha);
    const auto sorted = sorted_copy(set.values);
    RejectionRegion r;
    r.test = set.test;
    r.n = set.n;
    r.alpha = alpha;
    r.m = set.m;
    r.seed = set.seed;
    r.divisor = set.divisor;
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (direction(set.test)) {
        case Direction::TwoSided:
            r.kind = RegionKind::TwoSided;
            r.lower = quantile_sorted(sorted, alpha / 2.0);
            r.upper = quantile_sorted(sorted, 1.0 - alpha / 2.0);
            break;
        case Direction::Upper:
            r.kind = RegionKind::UpperTail;
            r.lower = -inf;
            r.upper = quantile_sorted(sorted, 1.0 - alpha);
            break;
        case Direction::Lower:
            r.kind = RegionKind::LowerTail;
            r.lower = quantile_sorted(sorted, alpha);
            r.upper = inf;
            break;
    }
    return r;
}

RejectionRegion calibrate(TestId test, std::size_t n, double alpha, std::size_t m, const Seed& seed,
                          const SimulationOptions& options) {
    const TestId one[] = {test};
    const std::size_t ns[] = {n};
    return calibrate_grid(one, ns, alpha, m, seed, options).front();
}

std::vector<RejectionRegion> calibrate_grid(std::span<const TestId> tests, std::span<const std::size_t> ns,
                                            double alpha, std::size_t m, const Seed& seed,
                                            const SimulationOptions& options) {
    check_alpha(alpha);
    if (m < kMinCalibrationReplicates) {
        throw ArgumentError("calibration needs m >= " + std::to_string(kMinCalibrationReplicates) + ", got " +
                            std::to_string(m));
    }
    std::vector<RejectionRegion> regions;
    regions.reserve(tests.size() * ns.size());
    for (std::size_t n : ns) {
        for (const auto& set : simulate_null(tests, n, m, seed, options)) {
            regions.push_back(region_from_null(set, alpha));
        }
    }
    return regions;
}

std::vector<VariancePoint> null_variance_curve(std::span<const std::size_t> ns, std::size_t m, const Seed& seed,
                                               const SimulationOptions& options) {
    std::vector<VariancePoint> out;
    out.reserve(ns.size());
    for (std::size_t n : ns) {
        const auto set = simulate_null(TestId::ECFT, n, m, seed, options);
        out.push_back({n, sample_variance(set.values), asymptotic_variance(n)});
    }
    return out;
}

std::vector<IntervalPoint> ci_comparison(std::span<const std::size_t> ns, std::size_t m, double level,
                                         const Seed& seed, const SimulationOptions& options) {
    if (!(level > 0.0 && level < 1.0)) throw ArgumentError("confidence level must lie in (0, 1)");
    const double tail = (1.0 - level) / 2.0;
    const double z = special::normal_quantile(1.0 - tail);
    const double probs[] = {tail, 1.0 - tail};
    std::vector<IntervalPoint> out;
    out.reserve(ns.size());
    for (std::size_t n : ns) {
        const auto set = simulate_null(TestId::ECFT, n, m, seed, options);
        const auto q = percentiles(set, probs);
        const double half_width = z * std::sqrt(asymptotic_variance(n));
        out.push_back({n, q[0], q[1], -half_width, half_width});
    }
    return out;
}

}  // namespace ecft
