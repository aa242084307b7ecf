#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <vector>

#include <json.hpp>

#include "ecft/calibration.hpp"

namespace ecft {

/// Identity of a calibrated region; two calibrations with equal keys are bit-identical.
struct RegionKey {
    TestId test = TestId::ECFT;
    std::size_t n = 0;
    double alpha = 0.0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    Divisor divisor = Divisor::Unbiased;

    friend auto operator<=>(const RegionKey&, const RegionKey&) = default;
};

[[nodiscard]] RegionKey key_of(const RejectionRegion& region) noexcept;

/// {test, n, alpha, kind, bounds, m, seed, convention, toolkit_version}. `bounds`
/// is [lower, upper] for two-sided regions and [threshold] otherwise.
[[nodiscard]] nlohmann::json to_json(const RejectionRegion& region);
[[nodiscard]] RejectionRegion region_from_json(const nlohmann::json& record);

/**
 * Critical-value cache persisted as a JSON array of region records.
 *
 * Lookups take a shared lock, inserts an exclusive one. save() writes a
 * temporary file and renames it over the target, so readers in other
 * processes see either the old or the new document.
 */
class RegionCache {
  public:
    /// Loads `path` if it exists. Records written by another toolkit version are dropped.
    explicit RegionCache(std::filesystem::path path);

    /// $ECFT_CACHE_DIR/regions.json, or .ecft-cache/regions.json when unset.
    [[nodiscard]] static std::filesystem::path default_path();

    [[nodiscard]] std::optional<RejectionRegion> find(const RegionKey& key) const;
    void insert(const RejectionRegion& region);
    [[nodiscard]] std::vector<RejectionRegion> regions() const;
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

    /// Throws IoError when the file cannot be written.
    void save() const;

  private:
    std::filesystem::path path_;
    mutable std::shared_mutex mutex_;
    std::map<RegionKey, RejectionRegion> regions_;
};

}  // namespace ecft
