#include "copkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "copkit/error.hpp"

namespace copkit {

double standardNormalCdf(const double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double standardNormalQuantile(const double u)
{
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("standardNormalQuantile: u must lie in (0, 1)");
    return invertMonotone(standardNormalCdf, u, 0.0, 1.0);
}

double invertMonotone(const std::function<double(double)>& cdf, const double u,
                      const double start, const double scale)
{
    double step = scale > 0.0 ? scale : 1.0;
    double lo = start, hi = start;

    if (cdf(start) >= u)
    {
        while (cdf(lo) >= u)
        {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (!std::isfinite(lo))
                throw ConsistencyError("invertMonotone: lower bracket diverged");
        }
    }
    else
    {
        while (cdf(hi) < u)
        {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (!std::isfinite(hi))
                throw ConsistencyError("invertMonotone: upper bracket diverged");
        }
    }

    // invariant: cdf(lo) < u <= cdf(hi); bisect to adjacent doubles so that
    // hi is the smallest representable x with cdf(x) >= u
    while (hi - lo > 0x1.0p-52 * std::max(std::abs(lo), std::abs(hi)) + 1e-290)
    {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            break;
        if (cdf(mid) >= u)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double simpson(const std::function<double(double)>& f, const double a, const double b,
               std::size_t intervals)
{
    if (intervals < 2)
        intervals = 2;
    if (intervals % 2)
        ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return sum * h / 3.0;
}

}
