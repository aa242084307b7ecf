#include "ecft/ecf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecft/errors.hpp"

namespace ecft {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Location {
    double mean;
    double sd;
};

Location estimate_location(std::span<const double> x, Divisor divisor) {
    const std::size_t n = x.size();
    if (n < 2) throw ArgumentError("studentization needs at least 2 observations, got " + std::to_string(n));

    CompensatedSum total;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) {
            throw ArgumentError("observation " + std::to_string(i + 1) + " is not finite");
        }
        total.add(x[i]);
        max_abs = std::max(max_abs, std::fabs(x[i]));
    }
    const double mean = total.value() / static_cast<double>(n);

    CompensatedSum squares;
    for (double v : x) {
        const double d = v - mean;
        squares.add(d * d);
    }
    const double denom = divisor == Divisor::ML ? static_cast<double>(n) : static_cast<double>(n - 1);
    const double sd = std::sqrt(squares.value() / denom);

    // Spread at the rounding level of the data means the sample is constant.
    if (!(sd > 1e-13 * max_abs) || sd == 0.0) {
        throw DegenerateSampleError("sample has zero variance; cannot studentize");
    }
    return {mean, sd};
}

double log_modulus_check(double modulus) {
    if (modulus < 1e-300) throw UnderflowError("ECF modulus underflowed; data is pathological for v_n");
    return std::log(modulus);
}

}  // namespace

std::string_view to_string(Divisor d) noexcept {
    return d == Divisor::ML ? "ml" : "unbiased";
}

Divisor parse_divisor(std::string_view text) {
    if (text == "ml" || text == "ML" || text == "n") return Divisor::ML;
    if (text == "unbiased" || text == "Unbiased" || text == "n-1") return Divisor::Unbiased;
    throw ParseError("unknown divisor convention '" + std::string(text) + "' (expected 'ml' or 'unbiased')");
}

StudentizedSample studentize(std::span<const double> sample, Divisor divisor) {
    const auto [mean, sd] = estimate_location(sample, divisor);
    StudentizedSample out;
    out.values.reserve(sample.size());
    for (double v : sample) out.values.push_back((v - mean) / sd);
    out.source_mean = mean;
    out.source_sd = sd;
    out.divisor = divisor;
    return out;
}

EcfValue ecf(std::span<const double> sample, double t) {
    if (sample.empty()) throw ArgumentError("ECF of an empty sample");
    if (!std::isfinite(t)) throw ArgumentError("ECF argument t must be finite");
    CompensatedSum re;
    CompensatedSum im;
    for (double x : sample) {
        re.add(std::cos(t * x));
        im.add(std::sin(t * x));
    }
    const double n = static_cast<double>(sample.size());
    EcfValue out;
    out.t = t;
    out.real_part = re.value() / n;
    out.imag_part = im.value() / n;
    out.modulus = std::min(1.0, std::hypot(out.real_part, out.imag_part));
    return out;
}

VnStatistic vn_statistic(std::span<const double> sample, Divisor divisor) {
    const auto z = studentize(sample, divisor);
    const auto phi = ecf(z.values, 1.0);
    VnStatistic out;
    out.modulus_at_1 = phi.modulus;
    out.value = log_modulus_check(phi.modulus) + 0.5;
    out.n = sample.size();
    out.divisor = divisor;
    return out;
}

double vn_value(std::span<const double> sample, Divisor divisor) {
    const auto [mean, sd] = estimate_location(sample, divisor);
    CompensatedSum re;
    CompensatedSum im;
    for (double v : sample) {
        const double z = (v - mean) / sd;
        re.add(std::cos(z));
        im.add(std::sin(z));
    }
    const double n = static_cast<double>(sample.size());
    const double modulus = std::min(1.0, std::hypot(re.value() / n, im.value() / n));
    return log_modulus_check(modulus) + 0.5;
}

double asymptotic_variance(std::size_t n) {
    if (n == 0) throw ArgumentError("asymptotic variance needs n >= 1");
    return (std::cosh(1.0) - 1.5) / static_cast<double>(n);
}

double null_process_variance(double t) {
    const double s = t * t;
    if (s < 0.5) {
        // cosh(s) - 1 - s²/2 = Σ_{k≥2} s^{2k}/(2k)!, summed to avoid cancellation.
        double term = s * s * s * s / 24.0;
        double acc = 0.0;
        for (int k = 2; k < 12 && term != 0.0; ++k) {
            acc += term;
            term *= s * s / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        return 4.0 * std::exp(-2.0 * s) * acc;
    }
    // exp(-2s)cosh(s) rewritten so no intermediate overflows for large t.
    return 4.0 * (0.5 * (std::exp(-s) + std::exp(-3.0 * s)) - std::exp(-2.0 * s) * (1.0 + 0.5 * s * s));
}

}  // namespace ecft
