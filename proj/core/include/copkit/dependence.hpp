#ifndef COPKIT_DEPENDENCE_HPP_
#define COPKIT_DEPENDENCE_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "copkit/copula.hpp"
#include "copkit/margins.hpp"
#include "copkit/random.hpp"

namespace copkit {

/// Bivariate joint CDF H(x, y).
using BivariateCdf = std::function<double(double, double)>;

/// Quadrature layout for Hoeffding's covariance identity.
///
/// Each axis runs from the margin's tailLevel quantile to its
/// (1 - tailLevel) quantile. Cell edges are placed at the margin quantiles
/// of points equally spaced in normal score, and the integrand is taken at
/// cell midpoints (a midpoint rule on a quantile-adapted grid). For
/// margins with bounded support the range is clipped to the support.
struct HoeffdingGrid
{
    double tailLevel = 1e-10;
    std::size_t cells = 512;
};

/// Cov(X, Y) = integral of H(x, y) - F(x) G(y).
double hoeffdingCovariance(const BivariateCdf& joint, const Margin& x, const Margin& y,
                           const HoeffdingGrid& grid = {});

/// Hoeffding covariance divided by the product of the margin standard
/// deviations. cells < 16 throws ResolutionError.
double pearsonViaHoeffding(const BivariateCdf& joint, const Margin& x, const Margin& y,
                           const HoeffdingGrid& grid = {});

/// (rho_min, rho_max) from the lower and upper Frechet bounds plugged into
/// Hoeffding's identity. Zero-variance margins throw DomainError.
std::pair<double, double> extremalCorrelations(const Margin& x, const Margin& y,
                                               const HoeffdingGrid& grid = {});

/// Closed form for X ~ Lognormal(0, 1), Y ~ Lognormal(0, sigma^2).
std::pair<double, double> lognormalExtremalClosedForm(double sigma);

/// Monte Carlo estimate with its standard error.
struct Estimate
{
    double value;
    double stdError;
};

using PairSample = std::span<const std::pair<double, double>>;

/// Sample Pearson correlation.
double pearsonSample(PairSample pairs);

/// (concordant - discordant) / C(n, 2); tied pairs count as neither.
double kendallTauSample(PairSample pairs);

/// Pearson correlation of mid-ranks.
double spearmanRhoSample(PairSample pairs);

/// 4 E[C(U, V)] - 1 with (U, V) drawn from c.
Estimate kendallTauCopula(const Copula& c, std::size_t n, RandomStream& rng);

/// 12 E[U V] - 3 with (U, V) drawn from c.
Estimate spearmanRhoCopula(const Copula& c, std::size_t n, RandomStream& rng);

struct CompatibilityResult
{
    bool compatible;                               ///< necessary condition holds
    std::optional<std::array<int, 3>> witness;     ///< first violated (i, j, k), one-based
    double lower = 0.0, value = 0.0, upper = 0.0;  ///< bounds on tau_ik at the witness
};

/// Checks -1 + |tau_ij + tau_jk| <= tau_ik <= 1 - |tau_ij - tau_jk| for every
/// permutation (i, j, k) of (1, 2, 3).
CompatibilityResult compatibilityCheck(double tau12, double tau13, double tau23,
                                       double tol = 1e-12);

struct TauRhoBound
{
    double value;   ///< 3 tau - 2 rho_S
    bool violated;  ///< |value| > 1 + tol
};

TauRhoBound tauRhoBoundCheck(double tau, double rho, double tol = 1e-12);

/// Sample-based dependence summary. Standard errors are the usual
/// large-sample approximations: sqrt((1 - r^2) / (n - 2)) for Pearson,
/// sqrt(2 (2n + 5) / (9 n (n - 1))) for tau and 1 / sqrt(n - 1) for rho.
struct DependenceReport
{
    std::size_t n;
    double pearson, pearsonStdError;
    double kendallTau, kendallStdError;
    double spearmanRho, spearmanStdError;
    TauRhoBound tauRho;
};

DependenceReport dependenceReport(PairSample pairs);

}

#endif // COPKIT_DEPENDENCE_HPP_
