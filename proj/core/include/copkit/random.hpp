#ifndef COPKIT_RANDOM_HPP_
#define COPKIT_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace copkit {

/// Owned, seedable source of uniform variates.
///
/// Streams are never shared implicitly: every sampling routine takes one by
/// reference. Independent substreams for parallel or logically separate
/// tasks are obtained with derive(), which mixes the parent seed with a
/// name (or index) so the result depends only on the seed and the label.
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed = 0);

    std::uint64_t seed() const {return seed_;}

    /// Uniform variate on the open interval (0, 1).
    double uniform();

    /// Standard normal variate (Box-Muller, both halves used).
    double normal();

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n);

    RandomStream derive(std::string_view name) const;
    RandomStream derive(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spareNormal_ = 0.0;
    bool hasSpare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}

#endif // COPKIT_RANDOM_HPP_
