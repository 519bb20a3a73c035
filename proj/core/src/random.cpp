#include "copkit/random.hpp"

#include <cmath>
#include <numbers>

namespace copkit {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {
    std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }
}

RandomStream::RandomStream(const std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed))
{
}

double RandomStream::uniform()
{
    // 53 random bits, shifted by half an ulp so 0 and 1 are never produced
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal()
{
    if (hasSpare_)
    {
        hasSpare_ = false;
        return spareNormal_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spareNormal_ = r * std::sin(theta);
    hasSpare_ = true;
    return r * std::cos(theta);
}

std::uint64_t RandomStream::index(const std::uint64_t n)
{
    // reject the top partial block so r % n is unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % n;
}

RandomStream RandomStream::derive(const std::string_view name) const
{
    return RandomStream(splitmix64(seed_ ^ fnv1a(name)));
}

RandomStream RandomStream::derive(const std::uint64_t index) const
{
    return RandomStream(splitmix64(seed_ + 0x632be59bd9b4e019ULL * (index + 1)));
}

}
