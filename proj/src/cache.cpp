#include "ecft/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <string>

#include "ecft/errors.hpp"
#include "ecft/version.hpp"

namespace ecft {

RegionKey key_of(const RejectionRegion& region) noexcept {
    return {region.test, region.n, region.alpha, region.m, region.seed, region.divisor};
}

nlohmann::json to_json(const RejectionRegion& region) {
    nlohmann::json bounds = nlohmann::json::array();
    switch (region.kind) {
        case RegionKind::TwoSided:
            bounds.push_back(region.lower);
            bounds.push_back(region.upper);
            break;
        case RegionKind::UpperTail: bounds.push_back(region.upper); break;
        case RegionKind::LowerTail: bounds.push_back(region.lower); break;
    }
    return {
        {"test", std::string(to_string(region.test))},
        {"n", region.n},
        {"alpha", region.alpha},
        {"kind", std::string(to_string(region.kind))},
        {"bounds", bounds},
        {"m", region.m},
        {"seed", region.seed},
        {"convention", std::string(to_string(region.divisor))},
        {"toolkit_version", kToolkitVersion},
    };
}

RejectionRegion region_from_json(const nlohmann::json& record) {
    try {
        RejectionRegion r;
        r.test = parse_test_id(record.at("test").get<std::string>());
        r.n = record.at("n").get<std::size_t>();
        r.alpha = record.at("alpha").get<double>();
        r.kind = parse_region_kind(record.at("kind").get<std::string>());
        r.m = record.at("m").get<std::size_t>();
        r.seed = record.at("seed").get<std::uint64_t>();
        r.divisor = parse_divisor(record.at("convention").get<std::string>());
        const auto& bounds = record.at("bounds");
        constexpr double inf = std::numeric_limits<double>::infinity();
        switch (r.kind) {
            case RegionKind::TwoSided:
                r.lower = bounds.at(0).get<double>();
                r.upper = bounds.at(1).get<double>();
                break;
            case RegionKind::UpperTail:
                r.lower = -inf;
                r.upper = bounds.at(0).get<double>();
                break;
            case RegionKind::LowerTail:
                r.lower = bounds.at(0).get<double>();
                r.upper = inf;
                break;
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed region record: ") + e.what());
    }
}

RegionCache::RegionCache(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!std::filesystem::exists(path_, ec)) return;
    std::ifstream in(path_);
    if (!in) throw IoError("cannot read cache file " + path_.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("cache file " + path_.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ParseError("cache file " + path_.string() + " must hold a JSON array");
    for (const auto& record : doc) {
        if (record.value("toolkit_version", std::string{}) != kToolkitVersion) continue;
        auto region = region_from_json(record);
        regions_[key_of(region)] = region;
    }
}

std::filesystem::path RegionCache::default_path() {
    if (const char* dir = std::getenv("ECFT_CACHE_DIR"); dir != nullptr && *dir != '\0') {
        return std::filesystem::path(dir) / "regions.json";
    }
    return std::filesystem::path(".ecft-cache") / "regions.json";
}

std::optional<RejectionRegion> RegionCache::find(const RegionKey& key) const {
    std::shared_lock lock(mutex_);
    if (auto it = regions_.find(key); it != regions_.end()) return it->second;
    return std::nullopt;
}

void RegionCache::insert(const RejectionRegion& region) {
    std::unique_lock lock(mutex_);
    regions_[key_of(region)] = region;
}

std::vector<RejectionRegion> RegionCache::regions() const {
    std::shared_lock lock(mutex_);
    std::vector<RejectionRegion> out;
    out.reserve(regions_.size());
    for (const auto& [key, region] : regions_) out.push_back(region);
    return out;
}

void RegionCache::save() const {
    nlohmann::json doc = nlohmann::json::array();
    {
        std::shared_lock lock(mutex_);
        for (const auto& [key, region] : regions_) doc.push_back(to_json(region));
    }

    std::error_code ec;
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path(), ec);
        if (ec) throw IoError("cannot create cache directory " + path_.parent_path().string() + ": " + ec.message());
    }
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write cache file " + tmp.string());
        out << doc.dump(2) << '\n';
        if (!out) throw IoError("failed writing cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw IoError("cannot replace cache file " + path_.string() + ": " + ec.message());
}

}  // namespace ecft
