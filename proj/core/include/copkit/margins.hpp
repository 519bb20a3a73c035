#ifndef COPKIT_MARGINS_HPP_
#define COPKIT_MARGINS_HPP_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "copkit/random.hpp"

namespace copkit {

namespace family {
    struct Uniform {double lower; double upper;};
    struct Exponential {double rate;};
    struct Lognormal {double mu; double sigma;};
    /// F(x) = exp(-exp(-x))
    struct GumbelStandard {};
    struct Bernoulli {double p;};
    struct Empirical {std::vector<double> sorted;};
}

/// Immutable univariate distribution: CDF, generalized-inverse quantile,
/// inverse-transform sampling and (for continuous families) density and
/// moments.
///
/// quantile(u) is inf{x : cdf(x) >= u}. At u = 0 it returns the lower end
/// of the support and at u = 1 the upper end; if that end is infinite an
/// InfiniteQuantileError is thrown instead.
class Margin
{
public:
    using Family = std::variant<family::Uniform, family::Exponential,
                                family::Lognormal, family::GumbelStandard,
                                family::Bernoulli, family::Empirical>;

    static Margin uniform(double lower, double upper);
    static Margin exponential(double rate);
    static Margin lognormal(double mu, double sigma);
    static Margin gumbelStandard();
    static Margin bernoulli(double p);

    /// Copies and sorts xs; throws IngestionError on empty or non-finite input.
    static Margin empirical(std::span<const double> xs);

    double cdf(double x) const;
    double quantile(double u) const;

    /// Density of the continuous families; SingularFamilyError otherwise.
    double density(double x) const;

    double mean() const;
    double variance() const;

    bool isContinuous() const;

    /// Atoms of discrete families (empty for continuous ones).
    std::vector<double> atoms() const;

    /// n independent draws quantile(U_i); EmptySampleError when n == 0.
    std::vector<double> sample(RandomStream& rng, std::size_t n) const;

    double draw(RandomStream& rng) const {return quantile(rng.uniform());}

    const Family& family() const {return family_;}

    /// Short textual form, e.g. "exponential(1)".
    std::string describe() const;

private:
    explicit Margin(Family f) : family_(std::move(f)) {}

    Family family_;
};

/// Same as Margin::empirical; kept as a free function for symmetry with the
/// other constructors used by data ingestion.
Margin empiricalFromSample(std::span<const double> xs);

}

#endif // COPKIT_MARGINS_HPP_
