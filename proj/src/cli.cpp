#include "ecft/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecft/cache.hpp"
#include "ecft/calibration.hpp"
#include "ecft/classic_tests.hpp"
#include "ecft/csv.hpp"
#include "ecft/distributions.hpp"
#include "ecft/errors.hpp"
#include "ecft/power.hpp"

namespace ecft::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::size_t parse_size(std::string_view token, std::string_view list) {
    std::size_t v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || token.empty()) {
        throw ParseError("invalid sample size '" + std::string(token) + "' in '" + std::string(list) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    for (;;) {
        auto pos = text.find(sep);
        parts.push_back(trim(text.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        text = text.substr(pos + 1);
    }
    return parts;
}

enum class Format { Csv, Json };

/// Settings shared by all subcommands.
struct CommonConfig {
    std::uint64_t seed = 42;
    std::string convention = "unbiased";
    unsigned threads = 0;
    std::string cache_path;
    std::string format = "csv";
    std::string output = "-";
    double alpha = 0.05;

    [[nodiscard]] Divisor divisor() const { return parse_divisor(convention); }
    [[nodiscard]] Format output_format() const { return format == "json" ? Format::Json : Format::Csv; }
    [[nodiscard]] SimulationOptions simulation() const { return {divisor(), threads}; }
    [[nodiscard]] std::filesystem::path cache() const {
        return cache_path.empty() ? RegionCache::default_path() : std::filesystem::path(cache_path);
    }
};

void add_common(CLI::App& cmd, CommonConfig& c, bool with_alpha) {
    cmd.add_option("--seed", c.seed, "Root seed")->capture_default_str();
    cmd.add_option("--convention", c.convention, "Variance divisor for studentization")
        ->check(CLI::IsMember({"ml", "unbiased"}))
        ->capture_default_str();
    cmd.add_option("--threads", c.threads, "Worker threads (0 = all cores); never changes results")
        ->capture_default_str();
    cmd.add_option("--cache", c.cache_path, "Critical-value cache file (default $ECFT_CACHE_DIR/regions.json)");
    cmd.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd.add_option("-o,--output", c.output, "Output file, '-' for standard output")->capture_default_str();
    if (with_alpha) {
        cmd.add_option("--alpha", c.alpha, "Test level")
            ->check(CLI::Validator(
                [](std::string& s) -> std::string {
                    double v = 0.0;
                    try {
                        v = std::stod(s);
                    } catch (...) {
                        return "alpha must be a number";
                    }
                    return (v > 0.0 && v <= 0.5) ? std::string{} : "alpha must lie in (0, 0.5]";
                },
                "(0, 0.5]"))
            ->capture_default_str();
    }
}

std::vector<TestId> parse_tests(const std::vector<std::string>& raw) {
    std::vector<TestId> tests;
    for (const auto& item : raw) {
        for (auto part : split(item, ',')) {
            auto id = parse_test_id(part);
            if (std::find(tests.begin(), tests.end(), id) == tests.end()) tests.push_back(id);
        }
    }
    return tests;
}

std::vector<DistributionSpec> parse_distributions(const std::vector<std::string>& raw) {
    std::vector<DistributionSpec> out;
    for (const auto& item : raw) {
        for (auto part : split(item, ';')) out.push_back(DistributionSpec::parse(part));
    }
    return out;
}

void emit(const CommonConfig& c, const std::string& content, std::ostream& out) {
    if (c.output == "-") {
        out << content;
        return;
    }
    std::ofstream file(c.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open output file " + c.output);
    file << content;
    if (!file) throw IoError("failed writing output file " + c.output);
}

// ---- calibrate ----------------------------------------------------------

struct CalibrateConfig {
    CommonConfig common;
    std::vector<std::string> tests{"ecft"};
    std::string ns;
    std::size_t m = 100000;
};

int cmd_calibrate(const CalibrateConfig& cfg, std::ostream& out) {
    const auto tests = parse_tests(cfg.tests);
    const auto ns = parse_size_list(cfg.ns);
    const Seed seed(cfg.common.seed);
    const auto options = cfg.common.simulation();
    constexpr double grid_probs[] = {0.025, 0.975};

    RegionCache cache(cfg.common.cache());
    std::ostringstream text;
    CsvWriter csv(text);
    nlohmann::json records = nlohmann::json::array();
    const bool with_test_column = tests.size() > 1;
    if (cfg.common.output_format() == Format::Csv) {
        if (with_test_column) {
            csv.row({"test", "n", "p025", "p975", "m", "seed"});
        } else {
            csv.row({"n", "p025", "p975", "m", "seed"});
        }
    }

    if (cfg.m < 10000) throw ArgumentError("calibration needs --m >= 10000");
    for (std::size_t n : ns) {
        for (const auto& set : simulate_null(tests, n, cfg.m, seed, options)) {
            cache.insert(region_from_null(set, cfg.common.alpha));
            const auto q = percentiles(set, grid_probs);
            const auto m_text = std::to_string(cfg.m);
            const auto seed_text = std::to_string(cfg.common.seed);
            if (cfg.common.output_format() == Format::Json) {
                records.push_back({{"test", std::string(to_string(set.test))},
                                   {"n", n},
                                   {"p025", q[0]},
                                   {"p975", q[1]},
                                   {"m", cfg.m},
                                   {"seed", cfg.common.seed},
                                   {"convention", std::string(to_string(set.divisor))}});
            } else if (with_test_column) {
                csv.row({to_string(set.test), std::to_string(n), format_double(q[0]), format_double(q[1]), m_text,
                         seed_text});
            } else {
                csv.row({std::to_string(n), format_double(q[0]), format_double(q[1]), m_text, seed_text});
            }
        }
    }
    cache.save();
    if (cfg.common.output_format() == Format::Json) text << records.dump(2) << '\n';
    emit(cfg.common, text.str(), out);
    return kExitOk;
}

// ---- test ---------------------------------------------------------------

struct TestConfig {
    CommonConfig common;
    std::vector<std::string> tests{"ecft"};
    std::string data;
    std::size_t m = 100000;
    bool no_simulate = false;
};

double mc_p_value(const NullSampleSet& set, double stat) {
    std::size_t at_least = 0;
    std::size_t at_most = 0;
    for (double v : set.values) {
        if (v >= stat) ++at_least;
        if (v <= stat) ++at_most;
    }
    const double denom = static_cast<double>(set.values.size()) + 1.0;
    const double upper = (static_cast<double>(at_least) + 1.0) / denom;
    const double lower = (static_cast<double>(at_most) + 1.0) / denom;
    switch (direction(set.test)) {
        case Direction::Upper: return upper;
        case Direction::Lower: return lower;
        case Direction::TwoSided: return std::min(1.0, 2.0 * std::min(upper, lower));
    }
    return 1.0;
}

int cmd_test(const TestConfig& cfg, std::ostream& out) {
    std::vector<double> data;
    {
        std::ifstream in(cfg.data);
        if (!in) throw IoError("cannot open data file " + cfg.data);
        data = parse_observations(in);
    }
    if (data.size() < 2) throw ArgumentError("need at least 2 observations, got " + std::to_string(data.size()));

    const auto tests = parse_tests(cfg.tests);
    const Seed seed(cfg.common.seed);
    const auto options = cfg.common.simulation();
    const std::size_t n = data.size();
    RegionCache cache(cfg.common.cache());
    bool cache_dirty = false;

    std::ostringstream text;
    CsvWriter csv(text);
    nlohmann::json records = nlohmann::json::array();
    csv.row({"test", "n", "statistic", "kind", "lower", "upper", "decision", "p_value", "m", "seed", "convention"});

    for (auto test : tests) {
        check_sample_size(test, n);
        const double stat = statistic(test, data, options.divisor);

        const RegionKey key{test, n, cfg.common.alpha, cfg.m, cfg.common.seed, options.divisor};
        auto region = cache.find(key);
        std::optional<double> p_value;
        if (cfg.no_simulate) {
            if (!region) {
                throw ConfigurationError("no calibrated region for (" + std::string(to_string(test)) + ", n=" +
                                         std::to_string(n) + ", m=" + std::to_string(cfg.m) +
                                         ") in cache; run `ecftest calibrate --test " + std::string(to_string(test)) +
                                         " --n " + std::to_string(n) + " --m " + std::to_string(cfg.m) +
                                         "` first, or drop --no-simulate");
            }
        } else {
            if (cfg.m < 10000) throw ArgumentError("calibration needs --m >= 10000");
            const auto set = simulate_null(test, n, cfg.m, seed, options);
            if (!region) {
                region = region_from_null(set, cfg.common.alpha);
                cache.insert(*region);
                cache_dirty = true;
            }
            p_value = mc_p_value(set, stat);
        }

        const bool reject = region->rejects(stat);
        const std::string decision = reject ? "reject" : "fail_to_reject";
        if (cfg.common.output_format() == Format::Json) {
            nlohmann::json rec = {{"test", std::string(to_string(test))},
                                  {"n", n},
                                  {"statistic", stat},
                                  {"region", to_json(*region)},
                                  {"decision", decision},
                                  {"m", cfg.m},
                                  {"seed", cfg.common.seed},
                                  {"convention", std::string(to_string(options.divisor))}};
            rec["p_value"] = p_value ? nlohmann::json(*p_value) : nlohmann::json(nullptr);
            records.push_back(rec);
        } else {
            csv.row({to_string(test), std::to_string(n), format_double(stat), to_string(region->kind),
                     format_double(region->lower), format_double(region->upper), decision,
                     p_value ? format_double(*p_value) : std::string("NA"), std::to_string(cfg.m),
                     std::to_string(cfg.common.seed), to_string(options.divisor)});
        }
    }
    if (cache_dirty) cache.save();

    if (cfg.common.output_format() == Format::Json) {
        emit(cfg.common, records.dump(2) + "\n", out);
    } else {
        emit(cfg.common, text.str(), out);
    }
    return kExitOk;
}

// ---- power --------------------------------------------------------------

struct PowerConfig {
    CommonConfig common;
    std::string preset;
    std::vector<std::string> tests{"ecft,ll,jb,sw,ad,dp"};
    std::vector<std::string> dists;
    std::string ns = "15,30,100,250,500";
    std::size_t m = 10000;
    std::size_t cal_m = 100000;
    std::uint64_t cal_seed = 42;
    bool auto_calibrate = false;
};

int cmd_power(const PowerConfig& cfg, std::ostream& out) {
    StudyConfig study;
    bool auto_calibrate = cfg.auto_calibrate;
    if (cfg.preset == "paper") {
        study = paper_study(cfg.m, Seed(cfg.common.seed));
        auto_calibrate = true;
    } else {
        if (cfg.dists.empty()) throw ArgumentError("power needs --dist or --preset paper");
        study.distributions = parse_distributions(cfg.dists);
        study.ns = parse_size_list(cfg.ns);
        study.tests = parse_tests(cfg.tests);
        study.m = cfg.m;
        study.seed = Seed(cfg.common.seed);
    }
    study.alpha = cfg.common.alpha;
    study.threads = cfg.common.threads;
    if (study.m == 0) throw ArgumentError("--m must be at least 1");

    const auto options = cfg.common.simulation();
    RegionCache cache(cfg.common.cache());
    std::vector<RejectionRegion> regions;
    std::map<std::size_t, std::vector<TestId>> missing;
    for (std::size_t n : study.ns) {
        for (auto test : study.tests) {
            if (auto r = cache.find({test, n, study.alpha, cfg.cal_m, cfg.cal_seed, options.divisor})) {
                regions.push_back(*r);
            } else {
                missing[n].push_back(test);
            }
        }
    }
    if (!missing.empty()) {
        if (!auto_calibrate) {
            std::string msg = "calibration cache " + cache.path().string() + " does not cover:";
            for (const auto& [n, tests] : missing) {
                for (auto t : tests) msg += " (" + std::string(to_string(t)) + ", n=" + std::to_string(n) + ")";
            }
            throw ConfigurationError(msg + "; run `ecftest calibrate` for them or pass --auto-calibrate");
        }
        for (const auto& [n, tests] : missing) {
            const std::size_t one_n[] = {n};
            for (auto& r : calibrate_grid(tests, one_n, study.alpha, cfg.cal_m, Seed(cfg.cal_seed), options)) {
                cache.insert(r);
                regions.push_back(r);
            }
        }
        cache.save();
    }

    const auto table = run_study(study, regions);
    std::ostringstream text;
    if (cfg.common.output_format() == Format::Json) {
        text << to_json(table).dump(2) << '\n';
    } else {
        write_csv(text, table);
    }
    emit(cfg.common, text.str(), out);
    return kExitOk;
}

// ---- nulldist -----------------------------------------------------------

struct NulldistConfig {
    CommonConfig common;
    std::string test = "ecft";
    std::string ns;
    std::size_t m = 0;
    std::string curve = "none";
    double level = 0.95;
};

int cmd_nulldist(const NulldistConfig& cfg, std::ostream& out) {
    const Seed seed(cfg.common.seed);
    const auto options = cfg.common.simulation();
    const bool json = cfg.common.output_format() == Format::Json;
    std::ostringstream text;
    CsvWriter csv(text);
    const auto seed_text = std::to_string(cfg.common.seed);

    if (cfg.curve == "none") {
        const auto test = parse_test_id(cfg.test);
        const auto ns = parse_size_list(cfg.ns.empty() ? "30" : cfg.ns);
        const std::size_t m = cfg.m == 0 ? 100000 : cfg.m;
        nlohmann::json sets = nlohmann::json::array();
        if (!json) csv.row({"n", "replicate", "value"});
        for (std::size_t n : ns) {
            const auto set = simulate_null(test, n, m, seed, options);
            if (json) {
                sets.push_back({{"test", std::string(to_string(test))},
                                {"n", n},
                                {"m", m},
                                {"seed", cfg.common.seed},
                                {"convention", std::string(to_string(set.divisor))},
                                {"values", set.values}});
            } else {
                const auto n_text = std::to_string(n);
                for (std::size_t i = 0; i < set.values.size(); ++i) {
                    csv.row({n_text, std::to_string(i), format_double(set.values[i])});
                }
            }
        }
        if (json) text << sets.dump(2) << '\n';
    } else if (cfg.curve == "variance" || cfg.curve == "ci") {
        const auto ns = parse_size_list(cfg.ns.empty() ? "15,30,50,100,250,500,1000,2000" : cfg.ns);
        const std::size_t m = cfg.m == 0 ? 1000 : cfg.m;
        const auto m_text = std::to_string(m);
        nlohmann::json rows = nlohmann::json::array();
        if (cfg.curve == "variance") {
            if (!json) csv.row({"n", "mc_variance", "asymptotic_variance", "m", "seed"});
            for (const auto& p : null_variance_curve(ns, m, seed, options)) {
                if (json) {
                    rows.push_back({{"n", p.n},
                                    {"mc_variance", p.mc_variance},
                                    {"asymptotic_variance", p.asymptotic_variance},
                                    {"m", m},
                                    {"seed", cfg.common.seed}});
                } else {
                    csv.row({std::to_string(p.n), format_double(p.mc_variance), format_double(p.asymptotic_variance),
                             m_text, seed_text});
                }
            }
        } else {
            if (!json) {
                csv.row({"n", "simulated_lower", "simulated_upper", "asymptotic_lower", "asymptotic_upper", "level",
                         "m", "seed"});
            }
            for (const auto& p : ci_comparison(ns, m, cfg.level, seed, options)) {
                if (json) {
                    rows.push_back({{"n", p.n},
                                    {"simulated_lower", p.simulated_lower},
                                    {"simulated_upper", p.simulated_upper},
                                    {"asymptotic_lower", p.asymptotic_lower},
                                    {"asymptotic_upper", p.asymptotic_upper},
                                    {"level", cfg.level},
                                    {"m", m},
                                    {"seed", cfg.common.seed}});
                } else {
                    csv.row({std::to_string(p.n), format_double(p.simulated_lower), format_double(p.simulated_upper),
                             format_double(p.asymptotic_lower), format_double(p.asymptotic_upper),
                             format_double(cfg.level), m_text, seed_text});
                }
            }
        }
        if (json) text << rows.dump(2) << '\n';
    } else {
        throw ArgumentError("unknown curve '" + cfg.curve + "' (expected none, variance or ci)");
    }
    emit(cfg.common, text.str(), out);
    return kExitOk;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
    const auto parts = split(text, ',');
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] == "...") {
            if (out.size() < 2 || i + 1 >= parts.size()) {
                throw ParseError("'...' in '" + std::string(text) + "' needs two values before it and one after");
            }
            const std::size_t a = out[out.size() - 2];
            const std::size_t b = out.back();
            const std::size_t end = parse_size(parts[i + 1], text);
            if (b <= a || end < b) throw ParseError("'...' needs an increasing progression in '" + std::string(text) + "'");
            for (std::size_t v = b + (b - a); v < end; v += b - a) out.push_back(v);
            continue;
        }
        out.push_back(parse_size(parts[i], text));
    }
    if (out.empty()) throw ParseError("empty sample-size list");
    for (auto n : out) {
        if (n == 0) throw ParseError("sample sizes must be positive");
    }
    return out;
}

std::vector<double> parse_observations(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        double v = 0.0;
        const char* first = body.data();
        const char* last = body.data() + body.size();
        if (*first == '+') ++first;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
            throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(body) +
                             "' as a finite decimal");
        }
        values.push_back(v);
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Normality tests based on the empirical characteristic function", "ecftest"};
    app.require_subcommand(1);

    CalibrateConfig cal;
    auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo critical values; writes a percentile grid");
    add_common(*calibrate, cal.common, true);
    calibrate->add_option("--test", cal.tests, "Tests to calibrate (comma list)")->capture_default_str();
    calibrate->add_option("--n", cal.ns, "Sample sizes, e.g. 15,30,100 or 50,100,...,2000")->required();
    calibrate->add_option("--m", cal.m, "Null replicates")->capture_default_str();

    TestConfig tst;
    auto* test = app.add_subcommand("test", "Test a data file for normality");
    add_common(*test, tst.common, true);
    test->add_option("--data", tst.data, "File with one observation per line")->required();
    test->add_option("--test", tst.tests, "Tests to apply (comma list)")->capture_default_str();
    test->add_option("--m", tst.m, "Null replicates for the region and p-value")->capture_default_str();
    test->add_flag("--no-simulate", tst.no_simulate, "Use only cached regions; p-value is reported as NA");

    PowerConfig pow;
    pow.common.seed = 7;
    auto* power = app.add_subcommand("power", "Power study over distributions, sample sizes and tests");
    add_common(*power, pow.common, true);
    power->add_option("--preset", pow.preset, "Named study grid")->check(CLI::IsMember({"paper"}));
    power->add_option("--tests", pow.tests, "Tests (comma list)")->capture_default_str();
    power->add_option("--dist", pow.dists, "Distribution, e.g. uniform01, t:4, mixture:2,0.2 (repeatable)");
    power->add_option("--n", pow.ns, "Sample sizes")->capture_default_str();
    power->add_option("--m", pow.m, "Replicates per cell")->capture_default_str();
    power->add_option("--cal-m", pow.cal_m, "Null replicates per calibration")->capture_default_str();
    power->add_option("--cal-seed", pow.cal_seed, "Calibration seed")->capture_default_str();
    power->add_flag("--auto-calibrate", pow.auto_calibrate, "Calibrate uncovered (test, n) pairs");

    NulldistConfig nd;
    auto* nulldist = app.add_subcommand("nulldist", "Raw null statistics or variance/interval curves");
    add_common(*nulldist, nd.common, false);
    nulldist->add_option("--test", nd.test, "Test whose null values to emit")->capture_default_str();
    nulldist->add_option("--n", nd.ns, "Sample sizes");
    nulldist->add_option("--m", nd.m, "Replicates (default 100000 for values, 1000 for curves)");
    nulldist->add_option("--curve", nd.curve, "none, variance or ci")
        ->check(CLI::IsMember({"none", "variance", "ci"}))
        ->capture_default_str();
    nulldist->add_option("--level", nd.level, "Confidence level for --curve ci")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(cal, out);
        if (test->parsed()) return cmd_test(tst, out);
        if (power->parsed()) return cmd_power(pow, out);
        if (nulldist->parsed()) return cmd_nulldist(nd, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace ecft::cli
