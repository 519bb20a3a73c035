// Test-only reference computations. Nothing here calls into the library's
// numerical code paths; distribution functions come from Boost.Math and the
// integrals are brute-force grids.

#ifndef COPKIT_TESTS_ORACLES_HPP_
#define COPKIT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>

namespace oracle {

/// Asymptotic Kolmogorov-Smirnov critical value at significance 0.01.
inline double ksCritical01(const std::size_t n)
{
    return 1.6276 / std::sqrt(static_cast<double>(n));
}

/// Same at significance 0.001, for loops running many KS checks.
inline double ksCritical001(const std::size_t n)
{
    return 1.9495 / std::sqrt(static_cast<double>(n));
}

/// sup |F_n - F| for a continuous reference cdf.
inline double ksStatistic(std::vector<double> xs, const std::function<double(double)>& cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Pearson chi-square goodness-of-fit p-value for discrete data.
inline double chiSquarePValue(const std::vector<double>& xs, const std::map<double, double>& pmf)
{
    std::map<double, double> counts;
    for (const double x : xs)
        counts[x] += 1.0;
    const double n = static_cast<double>(xs.size());
    double stat = 0.0;
    int cells = 0;
    for (const auto& [value, p] : pmf)
    {
        if (p <= 0.0)
        {
            if (counts.count(value)) return 0.0;
            continue;
        }
        const double expected = n * p;
        const double observed = counts.count(value) ? counts.at(value) : 0.0;
        stat += (observed - expected) * (observed - expected) / expected;
        ++cells;
    }
    for (const auto& [value, c] : counts)
        if (!pmf.count(value)) return 0.0;
    if (cells < 2)
        return 1.0;
    boost::math::chi_squared dist(cells - 1);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

inline double normalCdf(const double z)
{
    return boost::math::cdf(boost::math::normal(), z);
}

inline double normalQuantile(const double u)
{
    return boost::math::quantile(boost::math::normal(), u);
}

inline double lognormalCdf(const double x, const double mu, const double sigma)
{
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::lognormal(mu, sigma), x);
}

/// Sample mean and standard error of the mean.
inline std::pair<double, double> meanAndError(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (const double x : xs) m += x;
    m /= n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

/// Midpoint rule on [0,1]^2 with an n x n grid.
inline double unitSquareMidpoint(const std::function<double(double, double)>& f, const int n)
{
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += f((i + 0.5) / n, (j + 0.5) / n);
    return s / (static_cast<double>(n) * n);
}

/// Kendall's tau by brute force over all pairs, written independently of
/// the library (integer sign comparisons).
inline double bruteKendall(const std::vector<std::pair<double, double>>& p)
{
    long long c = 0, d = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
        {
            const int sx = (p[i].first > p[j].first) - (p[i].first < p[j].first);
            const int sy = (p[i].second > p[j].second) - (p[i].second < p[j].second);
            if (sx * sy > 0) ++c;
            if (sx * sy < 0) ++d;
        }
    const double m = static_cast<double>(p.size()) * (p.size() - 1) / 2.0;
    return static_cast<double>(c - d) / m;
}

/// Correlated standard normal pairs (Box-Muller plus linear mix), using the
/// standard library engine rather than the library's RandomStream.
inline std::vector<std::pair<double, double>> bivariateNormal(const double rho, const std::size_t n,
                                                              const std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    while (out.size() < n)
    {
        const double u1 = 1.0 - unif(gen), u2 = unif(gen);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double z1 = r * std::cos(2.0 * std::numbers::pi * u2);
        const double z2 = r * std::sin(2.0 * std::numbers::pi * u2);
        out.emplace_back(z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
    }
    return out;
}

}

#endif // COPKIT_TESTS_ORACLES_HPP_
