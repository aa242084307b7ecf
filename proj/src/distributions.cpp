#include "ecft/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "ecft/errors.hpp"
#include "ecft/special.hpp"

namespace ecft {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be a positive finite number, got " + std::to_string(v));
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s, std::string_view context) {
    double v = 0.0;
    auto first = s.data();
    auto last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || first == last) {
        throw ParseError("invalid number '" + std::string(s) + "' in distribution '" + std::string(context) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double chi_squared_draw(double dof, Rng& rng) {
    const double whole = std::floor(dof);
    if (whole == dof && dof <= 64.0) {
        double acc = 0.0;
        for (int i = 0; i < static_cast<int>(dof); ++i) {
            const double z = rng.normal();
            acc += z * z;
        }
        return acc;
    }
    return 2.0 * rng.gamma(0.5 * dof);
}

}  // namespace

DistributionSpec DistributionSpec::normal(double mean, double sd) {
    require_finite(mean, "normal mean");
    require_positive(sd, "normal sd");
    return {Family::Normal, mean, sd};
}

DistributionSpec DistributionSpec::uniform01() { return {Family::Uniform01, 0.0, 0.0}; }

DistributionSpec DistributionSpec::laplace(double location, double scale) {
    require_finite(location, "laplace location");
    require_positive(scale, "laplace scale");
    return {Family::Laplace, location, scale};
}

DistributionSpec DistributionSpec::logistic(double location, double scale) {
    require_finite(location, "logistic location");
    require_positive(scale, "logistic scale");
    return {Family::Logistic, location, scale};
}

DistributionSpec DistributionSpec::student_t(double dof) {
    require_positive(dof, "t degrees of freedom");
    return {Family::StudentT, dof, 0.0};
}

DistributionSpec DistributionSpec::lognormal(double log_mean, double log_sd) {
    require_finite(log_mean, "lognormal log-mean");
    require_positive(log_sd, "lognormal log-sd");
    return {Family::LogNormal, log_mean, log_sd};
}

DistributionSpec DistributionSpec::weibull(double shape, double scale) {
    require_positive(shape, "weibull shape");
    require_positive(scale, "weibull scale");
    return {Family::Weibull, shape, scale};
}

DistributionSpec DistributionSpec::chi_squared(double dof) {
    require_positive(dof, "chi-squared degrees of freedom");
    return {Family::ChiSquared, dof, 0.0};
}

DistributionSpec DistributionSpec::normal_mixture(double sigma, double alpha) {
    require_positive(sigma, "mixture sigma");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ParameterError("mixture alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    return {Family::NormalMixture, sigma, alpha};
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
    std::string lowered(trim(text));
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string_view body = lowered;

    std::string_view name = body;
    std::vector<double> params;
    if (auto colon = body.find(':'); colon != std::string_view::npos) {
        name = trim(body.substr(0, colon));
        std::string_view rest = body.substr(colon + 1);
        for (;;) {
            auto comma = rest.find(',');
            params.push_back(parse_number(trim(rest.substr(0, comma)), text));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }

    auto arity = [&](std::size_t max) {
        if (params.size() > max) {
            throw ParseError("too many parameters for '" + std::string(name) + "' in '" + std::string(text) + "'");
        }
    };
    auto get = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };

    if (name == "normal" || name == "norm" || name == "gaussian") {
        arity(2);
        return normal(get(0, 0.0), get(1, 1.0));
    }
    if (name == "uniform01" || name == "uniform" || name == "unif") {
        arity(0);
        return uniform01();
    }
    if (name == "laplace") {
        arity(2);
        return laplace(get(0, 0.0), get(1, 1.0));
    }
    if (name == "logistic") {
        arity(2);
        return logistic(get(0, 0.0), get(1, 1.0));
    }
    if (name == "t" || name == "student_t" || name == "studentt") {
        arity(1);
        if (params.empty()) throw ParseError("t requires degrees of freedom, e.g. 't:4'");
        return student_t(params[0]);
    }
    if (name == "lognormal" || name == "lnorm") {
        arity(2);
        return lognormal(get(0, 0.0), get(1, 1.0));
    }
    if (name == "weibull") {
        arity(2);
        return weibull(get(0, 0.5), get(1, 1.0));
    }
    if (name == "chisq" || name == "chi2" || name == "chisquared") {
        arity(1);
        return chi_squared(get(0, 10.0));
    }
    if (name == "mixture" || name == "mix") {
        arity(2);
        if (params.size() != 2) throw ParseError("mixture requires 'mixture:sigma,alpha'");
        return normal_mixture(params[0], params[1]);
    }
    throw ParseError("unknown distribution '" + std::string(text) + "'");
}

std::string DistributionSpec::to_string() const {
    auto two = [&](const char* name) {
        return std::string(name) + ":" + format_number(params_[0]) + "," + format_number(params_[1]);
    };
    switch (family_) {
        case Family::Normal: return two("normal");
        case Family::Uniform01: return "uniform01";
        case Family::Laplace: return two("laplace");
        case Family::Logistic: return two("logistic");
        case Family::StudentT: return "t:" + format_number(params_[0]);
        case Family::LogNormal: return two("lognormal");
        case Family::Weibull: return two("weibull");
        case Family::ChiSquared: return "chisq:" + format_number(params_[0]);
        case Family::NormalMixture: return two("mixture");
    }
    return {};
}

double draw(const DistributionSpec& spec, Rng& rng) {
    const double a = spec.param(0);
    const double b = spec.param(1);
    switch (spec.family()) {
        case Family::Normal: return a + b * rng.normal();
        case Family::Uniform01: return rng.uniform_open();
        case Family::Laplace: {
            const double u = rng.uniform_open() - 0.5;
            return a - b * std::copysign(std::log1p(-2.0 * std::fabs(u)), u);
        }
        case Family::Logistic: {
            const double u = rng.uniform_open();
            return a + b * std::log(u / (1.0 - u));
        }
        case Family::StudentT: {
            const double z = rng.normal();
            return z / std::sqrt(chi_squared_draw(a, rng) / a);
        }
        case Family::LogNormal: return std::exp(a + b * rng.normal());
        case Family::Weibull: return b * std::pow(-std::log(rng.uniform_open()), 1.0 / a);
        case Family::ChiSquared: return chi_squared_draw(a, rng);
        case Family::NormalMixture: {
            const bool standard = rng.uniform_open() < b;
            const double z = rng.normal();
            return standard ? z : a * z;
        }
    }
    return 0.0;
}

void fill(const DistributionSpec& spec, Rng& rng, std::span<double> out) {
    for (auto& x : out) x = draw(spec, rng);
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, const Seed& seed) {
    if (n == 0) throw ArgumentError("sample size must be at least 1");
    std::vector<double> out(n);
    Rng rng(seed);
    fill(spec, rng, out);
    return out;
}

LabeledMixtureSample sample_mixture_labeled(const DistributionSpec& spec, std::size_t n, const Seed& seed) {
    if (spec.family() != Family::NormalMixture) throw ArgumentError("labeled sampling requires a mixture spec");
    if (n == 0) throw ArgumentError("sample size must be at least 1");
    LabeledMixtureSample out;
    out.values.resize(n);
    out.from_standard.resize(n);
    Rng rng(seed);
    const double sigma = spec.param(0);
    const double alpha = spec.param(1);
    for (std::size_t i = 0; i < n; ++i) {
        const bool standard = rng.uniform_open() < alpha;
        const double z = rng.normal();
        out.values[i] = standard ? z : sigma * z;
        out.from_standard[i] = standard ? 1 : 0;
    }
    return out;
}

double cdf(const DistributionSpec& spec, double x) {
    using special::normal_cdf;
    const double a = spec.param(0);
    const double b = spec.param(1);
    switch (spec.family()) {
        case Family::Normal: return normal_cdf((x - a) / b);
        case Family::Uniform01: return std::clamp(x, 0.0, 1.0);
        case Family::Laplace: {
            const double z = (x - a) / b;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        }
        case Family::Logistic: return 1.0 / (1.0 + std::exp(-(x - a) / b));
        case Family::StudentT: return boost::math::cdf(boost::math::students_t(a), x);
        case Family::LogNormal: return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - a) / b);
        case Family::Weibull: return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / b, a));
        case Family::ChiSquared: return x <= 0.0 ? 0.0 : boost::math::cdf(boost::math::chi_squared(a), x);
        case Family::NormalMixture: return b * normal_cdf(x) + (1.0 - b) * normal_cdf(x / a);
    }
    return 0.0;
}

}  // namespace ecft
