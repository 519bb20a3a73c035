#ifndef COPKIT_COPULA_HPP_
#define COPKIT_COPULA_HPP_

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "copkit/margins.hpp"
#include "copkit/random.hpp"

namespace copkit {

class Copula;

namespace copula_family {
    /// Pi_n(u) = prod u_i
    struct Independence {std::size_t dimension;};
    /// M_n(u) = min u_i
    struct Comonotone {std::size_t dimension;};
    /// W_2(u, v) = max(u + v - 1, 0); only a copula for n = 2
    struct Countermonotone {};
    /// u v exp{[(-ln u)^-delta + (-ln v)^-delta]^(-1/delta)}, delta > 0
    struct GumbelBev {double delta;};
    /// lambda W_2 + (1 - lambda) M_2
    struct FrechetMixture {double lambda;};
    /// Piecewise-uniform mass on a k x k grid; masses[i*k + j] is the mass of
    /// cell [i/k, (i+1)/k] x [j/k, (j+1)/k]. cumulative holds C on the
    /// (k+1)^2 grid nodes, cellCdf the running sum of masses for sampling.
    struct Checkerboard
    {
        std::size_t k;
        std::vector<double> masses;
        std::vector<double> cumulative;
        std::vector<double> cellCdf;
    };
    /// C^(u, v) = C(1 - u, 1 - v) + u + v - 1 of the wrapped copula
    struct Survival {std::shared_ptr<const Copula> base;};
}

/// Immutable copula evaluator with a sampler for every family.
class Copula
{
public:
    using Family = std::variant<copula_family::Independence, copula_family::Comonotone,
                                copula_family::Countermonotone, copula_family::GumbelBev,
                                copula_family::FrechetMixture, copula_family::Checkerboard,
                                copula_family::Survival>;

    static Copula independence(std::size_t dimension = 2);
    static Copula comonotone(std::size_t dimension = 2);
    static Copula countermonotone();
    static Copula gumbelBev(double delta);
    static Copula frechetMixture(double lambda);

    /// Row and column sums of `masses` must all be 1/k (within 1e-9).
    static Copula checkerboard(std::size_t k, std::vector<double> masses);

    /// Data-driven checkerboard on a ceil(sqrt(n)) grid. Each observation's
    /// rank cell [(r-1)/n, r/n] x [(s-1)/n, s/n] carries mass 1/n, spread
    /// uniformly and aggregated onto the coarse grid, so margins stay
    /// exactly uniform.
    static Copula checkerboardFromPairs(std::span<const std::pair<double, double>> pairs);

    /// Survival copula of a bivariate copula.
    Copula survival() const;

    std::size_t dimension() const;
    const Family& family() const {return family_;}
    std::string name() const;

    /// Throws DomainError for coordinates outside [0, 1] and ShapeError when
    /// u.size() differs from dimension().
    double operator()(std::span<const double> u) const;
    double operator()(double u, double v) const;

    /// False for the singular families M, W and their mixtures.
    bool isAbsolutelyContinuous() const;

    std::vector<double> sample(RandomStream& rng) const;
    std::array<double, 2> sample2(RandomStream& rng) const;

private:
    explicit Copula(Family f) : family_(std::move(f)) {}
    double eval2(double u, double v) const;

    Family family_;
};

/// W_n(u) = max(sum u_i - n + 1, 0); a copula only for n = 2.
double lowerFrechetBound(std::span<const double> u);
/// M_n(u) = min u_i
double upperFrechetBound(std::span<const double> u);

/// (C(u) - W_n(u), M_n(u) - C(u))
std::pair<double, double> frechetBoundGap(const Copula& c, std::span<const double> u);

struct CopulaTransforms
{
    double survival;  ///< C(1-u, 1-v) + u + v - 1
    double dual;      ///< u + v - C(u, v)
    double coCopula;  ///< 1 - C(1-u, 1-v)
    double diagonal;  ///< C(u, u)
};

/// Bivariate only (UnsupportedDimensionError otherwise).
CopulaTransforms copulaTransforms(const Copula& c, double u, double v);

/// delta_C(u) = C(u, ..., u)
double diagonalSection(const Copula& c, double u);

/// Central mixed second difference of C at (u, v) with step h. Requires
/// (u, v) at least 2h from the boundary; singular families throw
/// SingularFamilyError.
double copulaDensityNumeric(const Copula& c, double u, double v, double h = 1e-4);

/// dC/du by central difference, step shrunk near the edges of [0, 1].
double partialDerivativeU(const Copula& c, double u, double v);

enum class MPartial {zero, one, undefinedAtTie};

/// Value of dM_n/du_k at an interior point: 1 when u_k is the strict
/// minimum, 0 when some other coordinate is smaller, undefined at a tie.
/// k is zero-based.
MPartial mPartialDiscontinuity(std::span<const double> u, std::size_t k);

/// Quantile level used as the +infinity surrogate when marginalizing.
inline constexpr double kUpperSurrogateLevel = 1.0 - 1e-12;

/// F(x_1, ..., x_n) = C(F_1(x_1), ..., F_n(x_n)).
class SklarJoint
{
public:
    SklarJoint(Copula copula, std::vector<Margin> margins);

    double cdf(std::span<const double> x) const;

    /// k-th margin recovered from the joint with every other argument at
    /// its kUpperSurrogateLevel quantile.
    double marginalCdf(std::size_t k, double x) const;

    const Copula& copula() const {return copula_;}
    const std::vector<Margin>& margins() const {return margins_;}

private:
    Copula copula_;
    std::vector<Margin> margins_;
};

using JointCdf = std::function<double(std::span<const double>)>;

/// C(u) = F(Q_1(u_1), ..., Q_n(u_n)). Boundary coordinates follow limits:
/// any u_i = 0 gives 0; u_i = 1 is evaluated at the kUpperSurrogateLevel
/// quantile (all ones gives 1).
double sklarExtract(const JointCdf& joint, std::span<const Margin> margins,
                    std::span<const double> u);

}

#endif // COPKIT_COPULA_HPP_
