#pragma once

namespace ecft::special {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z) noexcept;

/// Standard normal upper tail 1 - Φ(z), accurate for large z.
[[nodiscard]] double normal_sf(double z) noexcept;

/// Standard normal quantile Φ⁻¹(p) (Wichura AS 241, ~1e-16 relative).
/// Returns ∓infinity at p = 0 / 1 and NaN outside [0, 1].
[[nodiscard]] double normal_quantile(double p) noexcept;

}  // namespace ecft::special
