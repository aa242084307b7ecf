#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace ecft {

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a hash of a string, used to turn textual tags into stream keys.
[[nodiscard]] constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/**
 * Root seed plus a derivation path.
 *
 * A stream is identified by the root and a sequence of integer keys (e.g.
 * test, sample size, replicate index). The derived key depends only on those
 * values, so replicate i draws the same numbers whichever worker runs it and
 * in whatever order.
 */
class Seed {
  public:
    constexpr Seed() = default;
    constexpr explicit Seed(std::uint64_t root) : root_(root), state_(mix64(root)) {}

    [[nodiscard]] constexpr std::uint64_t root() const noexcept { return root_; }

    /// Key identifying the full derivation path.
    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return state_; }

    /// Child seed one level deeper in the derivation path.
    [[nodiscard]] constexpr Seed derive(std::uint64_t component) const noexcept {
        Seed child = *this;
        child.state_ = mix64(state_ ^ mix64(component + 0x632be59bd9b4e019ULL));
        return child;
    }

    [[nodiscard]] constexpr Seed derive(std::initializer_list<std::uint64_t> path) const noexcept {
        Seed s = *this;
        for (auto c : path) s = s.derive(c);
        return s;
    }

    [[nodiscard]] constexpr Seed derive(std::string_view tag) const noexcept {
        return derive(hash_tag(tag));
    }

    friend constexpr bool operator==(const Seed&, const Seed&) = default;

  private:
    std::uint64_t root_ = 0;
    std::uint64_t state_ = mix64(0);
};

/**
 * xoshiro256** generator with a cached polar-method normal deviate.
 *
 * Satisfies UniformRandomBitGenerator. All variate transforms are implemented
 * here rather than through <random> distributions, whose algorithms differ
 * between standard libraries.
 */
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(const Seed& seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() noexcept;

    /// Standard normal deviate (Marsaglia polar method).
    double normal() noexcept;

    /// Gamma(shape, 1) deviate (Marsaglia-Tsang), shape > 0.
    double gamma(double shape) noexcept;

  private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ecft
