#ifndef COPKIT_NUMERIC_HPP_
#define COPKIT_NUMERIC_HPP_

#include <cstddef>
#include <functional>

namespace copkit {

double standardNormalCdf(double z);

/// Inverse of standardNormalCdf by bisection; u must lie in (0, 1).
double standardNormalQuantile(double u);

/// Smallest x with cdf(x) >= u for a nondecreasing cdf, by geometric
/// bracket expansion around `start` followed by bisection down to
/// neighbouring doubles. For a continuous cdf this leaves |cdf(x) - u|
/// at rounding level, well inside 1e-12.
double invertMonotone(const std::function<double(double)>& cdf, double u,
                      double start = 0.0, double scale = 1.0);

/// Composite Simpson rule with an even number of intervals.
double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t intervals);

}

#endif // COPKIT_NUMERIC_HPP_
