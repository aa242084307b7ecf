#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecft/random.hpp"

namespace ecft {

enum class Family : std::uint8_t {
    Normal,        // (mean, sd)
    Uniform01,     // no parameters
    Laplace,       // (location, scale)
    Logistic,      // (location, scale)
    StudentT,      // (degrees of freedom)
    LogNormal,     // (log-mean, log-sd)
    Weibull,       // (shape, scale)
    ChiSquared,    // (degrees of freedom)
    NormalMixture  // (sd of the second component, weight of N(0,1))
};

/**
 * A validated distribution family plus parameters.
 *
 * Canonical text form: `name[:p1[,p2]]`, e.g. `normal:0,1`, `t:4`,
 * `mixture:2,0.2`, `weibull:0.5,1`. Omitted parameters take the family
 * defaults (standard normal, Laplace(0,1), Logistic(0,1), LogNormal(0,1),
 * Weibull(0.5,1), chi-squared with 10 df).
 */
class DistributionSpec {
  public:
    static DistributionSpec normal(double mean = 0.0, double sd = 1.0);
    static DistributionSpec uniform01();
    static DistributionSpec laplace(double location = 0.0, double scale = 1.0);
    static DistributionSpec logistic(double location = 0.0, double scale = 1.0);
    static DistributionSpec student_t(double dof);
    static DistributionSpec lognormal(double log_mean = 0.0, double log_sd = 1.0);
    static DistributionSpec weibull(double shape = 0.5, double scale = 1.0);
    static DistributionSpec chi_squared(double dof = 10.0);
    /// With probability `alpha` a draw comes from N(0,1), otherwise from N(0, sigma²).
    static DistributionSpec normal_mixture(double sigma, double alpha);

    /// Parses the canonical text form (case-insensitive). Throws ParseError or ParameterError.
    static DistributionSpec parse(std::string_view text);

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] double param(std::size_t i) const { return params_.at(i); }

    /// Canonical text form; parse(to_string()) == *this.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

  private:
    DistributionSpec(Family f, double p0, double p1) : family_(f), params_{p0, p1} {}

    Family family_;
    std::array<double, 2> params_;
};

/// One draw from `spec`.
[[nodiscard]] double draw(const DistributionSpec& spec, Rng& rng);

/// Fills `out` with i.i.d. draws from `spec`.
void fill(const DistributionSpec& spec, Rng& rng, std::span<double> out);

/// n i.i.d. draws, deterministic in (spec, n, seed). Throws ArgumentError for n = 0.
[[nodiscard]] std::vector<double> sample(const DistributionSpec& spec, std::size_t n, const Seed& seed);

struct LabeledMixtureSample {
    std::vector<double> values;
    /// 1 where the draw came from the N(0,1) component.
    std::vector<std::uint8_t> from_standard;
};

/// Same draws as sample() for a NormalMixture spec, with component labels.
[[nodiscard]] LabeledMixtureSample sample_mixture_labeled(const DistributionSpec& spec, std::size_t n,
                                                          const Seed& seed);

/// Analytic CDF of `spec` at x.
[[nodiscard]] double cdf(const DistributionSpec& spec, double x);

}  // namespace ecft
