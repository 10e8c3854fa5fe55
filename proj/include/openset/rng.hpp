#pragma once

#include <array>
#include <cstdint>

namespace openset {

/// xoshiro256** seeded through splitmix64.
///
/// The algorithm is fixed so that synthetic corpora and weight
/// initializations are reproducible across platforms and implementations:
///   - the four state words are successive splitmix64 outputs of `seed`;
///   - uniform() takes the top 53 bits of next() and scales by 2^-53,
///     giving a value in [0, 1);
///   - gaussian() draws u1 then u2 via uniform() and returns the cosine
///     branch of Box-Muller, sqrt(-2 ln(1 - u1)) * cos(2 pi u2). The sine
///     branch is discarded, so every Gaussian consumes exactly two draws.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();
    double uniform();
    double uniform(double lo, double hi);
    double gaussian(double mean, double stddev);

private:
    std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace openset
