#ifndef COPKIT_VINE_HPP_
#define COPKIT_VINE_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "copkit/copula.hpp"
#include "copkit/margins.hpp"

namespace copkit {

/// Bivariate copula density c(u, v) on the unit square.
using PairDensity = std::function<double(double, double)>;

/// c = 1 (independence).
PairDensity unitDensity();

/// Numerical mixed-difference density of an absolutely continuous copula.
/// Evaluation points closer than 2h to the boundary are moved onto the
/// [2h, 1 - 2h] square. Singular families are rejected here, at
/// construction time.
PairDensity numericDensity(const Copula& c, double h = 1e-4);

/// Default Simpson resolution for conditional CDFs inside the vine.
inline constexpr std::size_t kConditionalIntervals = 512;

/// P(W <= target | given) for a pair density laid out on the probability
/// scale: integral over w in [0, target] of density(w), divided by the
/// integral over [0, 1]. `density` is the pair density with the
/// conditioning argument already bound.
double conditionalCdf(const std::function<double(double)>& density, double target,
                      std::size_t intervals = kConditionalIntervals);

/// Three-dimensional D-vine: pairs (1,2) and (2,3) in the first tree,
/// (1,3 | 2) in the second.
struct Vine3
{
    std::array<Margin, 3> margins;
    PairDensity c12;   ///< c12(F1(x1), F2(x2))
    PairDensity c23;   ///< c23(F2(x2), F3(x3))
    PairDensity c13g2; ///< c13|2(F1|2(x1|x2), F3|2(x3|x2))

    /// F1|2(x1 | x2)
    double conditional1Given2(double x1, double x2) const;
    /// F3|2(x3 | x2)
    double conditional3Given2(double x3, double x2) const;

    /// f3 f2 f1 * c12 * c23 * c13|2 at x.
    double density(std::span<const double, 3> x) const;

    /// Density on the tensor grid axis1 x axis2 x axis3, flattened with the
    /// last axis fastest. Conditional CDFs are computed once per (x1, x2)
    /// and (x3, x2) pair.
    std::vector<double> densityGrid(std::span<const double> axis1,
                                    std::span<const double> axis2,
                                    std::span<const double> axis3) const;
};

}

#endif // COPKIT_VINE_HPP_
