#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Empirical characteristic function and the log-modulus normality statistic.
///
/// For a sample studentized with estimated mean and standard deviation, the
/// standard normal characteristic function has modulus exp(-t²/2). The
/// statistic compares the studentized ECF modulus at t = 1 with exp(-1/2):
///
///     v_n = log |φ̂_S(1)| + 1/2
///
/// which is near zero for normal data. Under normality √n·v_n is
/// asymptotically N(0, cosh(1) - 3/2).
namespace ecft {

/// Divisor used for the variance estimate when studentizing.
enum class Divisor : std::uint8_t {
    ML,       ///< divide by n
    Unbiased  ///< divide by n - 1
};

[[nodiscard]] std::string_view to_string(Divisor d) noexcept;
/// Accepts "ml"/"n" and "unbiased"/"n-1". Throws ParseError.
[[nodiscard]] Divisor parse_divisor(std::string_view text);

struct StudentizedSample {
    std::vector<double> values;
    double source_mean = 0.0;
    double source_sd = 0.0;
    Divisor divisor = Divisor::Unbiased;
};

struct EcfValue {
    double t = 0.0;
    double real_part = 0.0;
    double imag_part = 0.0;
    double modulus = 0.0;
};

struct VnStatistic {
    double value = 0.0;
    std::size_t n = 0;
    double modulus_at_1 = 0.0;
    Divisor divisor = Divisor::Unbiased;
};

/// z_j = (x_j - mean) / sd. Requires n ≥ 2, finite values and nonzero spread.
[[nodiscard]] StudentizedSample studentize(std::span<const double> sample, Divisor divisor = Divisor::Unbiased);

/// (1/n) Σ exp(i t x_j), with compensated summation of both parts.
[[nodiscard]] EcfValue ecf(std::span<const double> sample, double t);

[[nodiscard]] VnStatistic vn_statistic(std::span<const double> sample, Divisor divisor = Divisor::Unbiased);

/// Allocation-free v_n value for Monte Carlo loops; same result as vn_statistic().value.
[[nodiscard]] double vn_value(std::span<const double> sample, Divisor divisor = Divisor::Unbiased);

/// (cosh(1) - 3/2) / n.
[[nodiscard]] double asymptotic_variance(std::size_t n);

/// Limit variance of √n(|φ̂_NS(t)|² - exp(-t²)): 4 exp(-2t²)(cosh(t²) - 1 - t⁴/2).
[[nodiscard]] double null_process_variance(double t);

}  // namespace ecft
