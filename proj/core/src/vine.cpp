#include "copkit/vine.hpp"

#include <algorithm>

#include "copkit/error.hpp"
#include "copkit/numeric.hpp"

namespace copkit {

PairDensity unitDensity()
{
    return [](double, double) {return 1.0;};
}

PairDensity numericDensity(const Copula& c, const double h)
{
    if (c.dimension() != 2)
        throw UnsupportedDimensionError("numericDensity: bivariate copula required");
    if (!c.isAbsolutelyContinuous())
        throw SingularFamilyError(c.name() + " is a singular family: density undefined");
    return [c, h](double u, double v) {
        const double lo = 2.0 * h, hi = 1.0 - 2.0 * h;
        return copulaDensityNumeric(c, std::clamp(u, lo, hi), std::clamp(v, lo, hi), h);
    };
}

double conditionalCdf(const std::function<double(double)>& density, const double target,
                      const std::size_t intervals)
{
    if (target <= 0.0)
        return 0.0;
    const double total = simpson(density, 0.0, 1.0, intervals);
    if (!(total > 0.0))
        throw ConsistencyError("conditionalCdf: pair density integrates to zero");
    if (target >= 1.0)
        return 1.0;
    return std::clamp(simpson(density, 0.0, target, intervals) / total, 0.0, 1.0);
}

double Vine3::conditional1Given2(const double x1, const double x2) const
{
    const double v = margins[1].cdf(x2);
    return conditionalCdf([&](double w) {return c12(w, v);}, margins[0].cdf(x1));
}

double Vine3::conditional3Given2(const double x3, const double x2) const
{
    const double v = margins[1].cdf(x2);
    return conditionalCdf([&](double w) {return c23(v, w);}, margins[2].cdf(x3));
}

double Vine3::density(const std::span<const double, 3> x) const
{
    const double u1 = margins[0].cdf(x[0]);
    const double u2 = margins[1].cdf(x[1]);
    const double u3 = margins[2].cdf(x[2]);
    const double marginal = margins[0].density(x[0]) * margins[1].density(x[1]) *
                            margins[2].density(x[2]);
    if (marginal == 0.0)
        return 0.0;
    return marginal * c12(u1, u2) * c23(u2, u3) *
           c13g2(conditional1Given2(x[0], x[1]), conditional3Given2(x[2], x[1]));
}

std::vector<double> Vine3::densityGrid(const std::span<const double> axis1,
                                       const std::span<const double> axis2,
                                       const std::span<const double> axis3) const
{
    const std::size_t n1 = axis1.size(), n2 = axis2.size(), n3 = axis3.size();

    std::vector<double> u1(n1), f1(n1), u2(n2), f2(n2), u3(n3), f3(n3);
    for (std::size_t i = 0; i < n1; ++i) {u1[i] = margins[0].cdf(axis1[i]); f1[i] = margins[0].density(axis1[i]);}
    for (std::size_t j = 0; j < n2; ++j) {u2[j] = margins[1].cdf(axis2[j]); f2[j] = margins[1].density(axis2[j]);}
    for (std::size_t k = 0; k < n3; ++k) {u3[k] = margins[2].cdf(axis3[k]); f3[k] = margins[2].density(axis3[k]);}

    std::vector<double> cond12(n1 * n2), cond32(n3 * n2);
    for (std::size_t j = 0; j < n2; ++j)
    {
        const double v = u2[j];
        const auto given12 = [&](double w) {return c12(w, v);};
        const auto given32 = [&](double w) {return c23(v, w);};
        for (std::size_t i = 0; i < n1; ++i)
            cond12[i * n2 + j] = conditionalCdf(given12, u1[i]);
        for (std::size_t k = 0; k < n3; ++k)
            cond32[k * n2 + j] = conditionalCdf(given32, u3[k]);
    }

    std::vector<double> out(n1 * n2 * n3);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
        {
            const double first = f1[i] * f2[j] * c12(u1[i], u2[j]);
            for (std::size_t k = 0; k < n3; ++k)
                out[(i * n2 + j) * n3 + k] =
                    first * f3[k] * c23(u2[j], u3[k]) *
                    c13g2(cond12[i * n2 + j], cond32[k * n2 + j]);
        }
    return out;
}

}
