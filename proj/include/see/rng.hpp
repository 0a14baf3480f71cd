#pragma once

#include <array>
#include <cstdint>

namespace see::rng {

/// Philox4x32-10 counter-based block generator (Salmon et al., SC'11).
/// Stateless: every (key, counter) pair maps to an independent 128-bit
/// block, so streams indexed by (seed, sample, step) need no coordination.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter);

/// Maps 64 random bits to the open interval (0, 1).
double u64_to_unit(std::uint64_t bits);

/// Inverse of the standard normal CDF (Wichura's PPND16 / AS 241),
/// accurate to about 1e-16 relative over (0, 1).
double inverse_normal_cdf(double p);

/// Standard normal draws keyed by (seed, sample index, step index) through
/// the inverse-CDF transform; identical keys give bit-identical values.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}

    double normal(std::uint64_t sample, std::uint64_t step = 0) const {
        const std::array<std::uint32_t, 4> counter = {
            static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
            static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
        const auto block = philox4x32(seed_, counter);
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
        return inverse_normal_cdf(u64_to_unit(bits));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
};

}  // namespace see::rng
