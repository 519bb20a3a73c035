#ifndef COPKIT_COUPLING_HPP_
#define COPKIT_COUPLING_HPP_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copkit/margins.hpp"
#include "copkit/random.hpp"

namespace copkit {

/// Finite probability mass function. Support is stored ascending and
/// distinct; probabilities are nonnegative and sum to 1 within 1e-12.
class Pmf
{
public:
    Pmf(std::vector<double> support, std::vector<double> probs);

    const std::vector<double>& support() const {return support_;}
    const std::vector<double>& probs() const {return probs_;}

    /// Mass at x (0 if x is not in the support).
    double at(double x) const;

    /// Cumulative-sum inversion over the ascending support.
    double draw(RandomStream& rng) const;

private:
    std::vector<double> support_;
    std::vector<double> probs_;
};

/// Union of all supports with every pmf's mass laid out on it
/// (missing values get probability 0).
struct MergedSupport
{
    std::vector<double> values;
    std::vector<std::vector<double>> probs; ///< probs[i][k] = p_i(values[k])
};

MergedSupport mergeSupports(std::span<const Pmf> pmfs);

/// One joint draw from a coupling. `coupled` is the coupling-event
/// indicator; it is only meaningful for maximal couplings and is false
/// otherwise.
struct CoupledDraw
{
    std::vector<double> values;
    bool coupled = false;
};

/// Joint sampler over R^n with declared margins.
class CoupledSampler
{
public:
    using DrawFn = std::function<CoupledDraw(RandomStream&)>;

    CoupledSampler(std::vector<std::string> margins, DrawFn fn)
        : margins_(std::move(margins)), draw_(std::move(fn)) {}

    std::size_t dimension() const {return margins_.size();}
    const std::vector<std::string>& margins() const {return margins_;}

    CoupledDraw draw(RandomStream& rng) const {return draw_(rng);}
    std::vector<CoupledDraw> draw(RandomStream& rng, std::size_t n) const;

private:
    std::vector<std::string> margins_;
    DrawFn draw_;
};

/// Joint law of two Bernoulli variables driven by one uniform.
struct BernoulliCoupling
{
    double p00, p01, p10, p11; ///< P(X=i, X'=j)
    double covariance;
    CoupledSampler sampler;
};

/// Requires 0 <= p <= q <= 1 (OrderError when p > q).
BernoulliCoupling bernoulliCoupling(double p, double q);

/// Coordinate i is Q_i(U) for a single standard uniform U per draw.
CoupledSampler quantileCoupling(std::vector<Margin> margins);

/// sum_x min_i p_i(x) over the merged support.
double couplingEventBound(std::span<const Pmf> pmfs);

/// Splitting-representation coupling attaining couplingEventBound.
CoupledSampler maximalCoupling(std::span<const Pmf> pmfs);

/// (1/2) sum_x |a(x) - b(x)|.
double totalVariation(const Pmf& a, const Pmf& b);

struct DominanceReport
{
    bool holds = false;
    double maxExcess = 0.0;                 ///< max over the grid of G(x) - F(x)
    std::optional<double> firstViolation;   ///< smallest grid x with G(x) - F(x) > tol
    std::vector<double> grid;
    std::optional<CoupledSampler> coupling; ///< quantile coupling when dominance holds
};

/// Checks F >= G (X <=_d X') on a dense grid and, when it holds, returns
/// the quantile coupling whose draws satisfy x <= x' pointwise.
DominanceReport strassenMonotoneCoupling(const Margin& f, const Margin& g,
                                         std::size_t gridSize = 1000,
                                         double tol = 1e-9);

}

#endif // COPKIT_COUPLING_HPP_
