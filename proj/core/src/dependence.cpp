#include "copkit/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "copkit/error.hpp"
#include "copkit/numeric.hpp"

namespace copkit {

namespace {
    struct Axis
    {
        std::vector<double> mid;
        std::vector<double> width;
    };

    Axis quantileAxis(const Margin& m, const HoeffdingGrid& grid)
    {
        const double tLo = standardNormalQuantile(grid.tailLevel);
        const double tHi = -tLo;
        const std::size_t n = grid.cells;
        std::vector<double> edges(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
        {
            const double t = tLo + (tHi - tLo) * static_cast<double>(i) / static_cast<double>(n);
            const double u = std::clamp(standardNormalCdf(t), grid.tailLevel, 1.0 - grid.tailLevel);
            edges[i] = m.quantile(u);
        }
        Axis axis;
        axis.mid.resize(n);
        axis.width.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            axis.mid[i] = 0.5 * (edges[i] + edges[i + 1]);
            axis.width[i] = edges[i + 1] - edges[i];
        }
        return axis;
    }

    void requirePairs(const PairSample pairs, const char* what)
    {
        if (pairs.size() < 2)
            throw DomainError(std::string(what) + ": at least two pairs required");
    }

    std::vector<double> midRanks(const std::vector<double>& xs)
    {
        const std::size_t n = xs.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {return xs[a] < xs[b];});
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n)
        {
            std::size_t j = i;
            while (j + 1 < n && xs[order[j + 1]] == xs[order[i]])
                ++j;
            const double r = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t t = i; t <= j; ++t)
                ranks[order[t]] = r;
            i = j + 1;
        }
        return ranks;
    }

    double correlation(const std::vector<double>& x, const std::vector<double>& y)
    {
        const double n = static_cast<double>(x.size());
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
            syy += (y[i] - my) * (y[i] - my);
        }
        if (!(sxx > 0.0) || !(syy > 0.0))
            throw DomainError("correlation of a constant sample is undefined");
        return sxy / std::sqrt(sxx * syy);
    }

    Estimate monteCarlo(const Copula& c, const std::size_t n, RandomStream& rng,
                        const double scale, const double shift,
                        double (*term)(const Copula&, double, double))
    {
        if (c.dimension() != 2)
            throw UnsupportedDimensionError("copula dependence measures need a bivariate copula");
        if (n == 0)
            throw EmptySampleError("Monte Carlo sample size must be positive");
        // Welford accumulation
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto [u, v] = c.sample2(rng);
            const double z = term(c, u, v);
            const double delta = z - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (z - mean);
        }
        const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
        return Estimate{scale * mean + shift, scale * std::sqrt(var / static_cast<double>(n))};
    }
}

double hoeffdingCovariance(const BivariateCdf& joint, const Margin& x, const Margin& y,
                           const HoeffdingGrid& grid)
{
    if (grid.cells < 16)
        throw ResolutionError("Hoeffding quadrature needs at least 16 cells per axis");
    if (!(grid.tailLevel > 0.0 && grid.tailLevel < 0.5))
        throw DomainError("Hoeffding quadrature tail level must lie in (0, 0.5)");

    const Axis ax = quantileAxis(x, grid);
    const Axis ay = quantileAxis(y, grid);
    std::vector<double> fy(ay.mid.size());
    for (std::size_t j = 0; j < fy.size(); ++j)
        fy[j] = y.cdf(ay.mid[j]);

    double total = 0.0;
    for (std::size_t i = 0; i < ax.mid.size(); ++i)
    {
        if (ax.width[i] == 0.0)
            continue;
        const double fx = x.cdf(ax.mid[i]);
        double row = 0.0;
        for (std::size_t j = 0; j < ay.mid.size(); ++j)
        {
            if (ay.width[j] == 0.0)
                continue;
            row += (joint(ax.mid[i], ay.mid[j]) - fx * fy[j]) * ay.width[j];
        }
        total += row * ax.width[i];
    }
    return total;
}

double pearsonViaHoeffding(const BivariateCdf& joint, const Margin& x, const Margin& y,
                           const HoeffdingGrid& grid)
{
    const double sx = std::sqrt(x.variance());
    const double sy = std::sqrt(y.variance());
    if (!(sx > 0.0) || !(sy > 0.0) || !std::isfinite(sx) || !std::isfinite(sy))
        throw DomainError("pearsonViaHoeffding: margins need finite nonzero variance");
    return hoeffdingCovariance(joint, x, y, grid) / (sx * sy);
}

std::pair<double, double> extremalCorrelations(const Margin& x, const Margin& y,
                                               const HoeffdingGrid& grid)
{
    if (!(x.variance() > 0.0) || !(y.variance() > 0.0))
        throw DomainError("extremalCorrelations: degenerate (zero-variance) margin");
    const BivariateCdf lower = [&](double a, double b) {
        return std::max(x.cdf(a) + y.cdf(b) - 1.0, 0.0);
    };
    const BivariateCdf upper = [&](double a, double b) {
        return std::min(x.cdf(a), y.cdf(b));
    };
    return {pearsonViaHoeffding(lower, x, y, grid), pearsonViaHoeffding(upper, x, y, grid)};
}

std::pair<double, double> lognormalExtremalClosedForm(const double sigma)
{
    if (!std::isfinite(sigma) || !(sigma > 0.0))
        throw DomainError("lognormalExtremalClosedForm: sigma must be positive");
    const double denom = std::sqrt(std::expm1(1.0) * std::expm1(sigma * sigma));
    return {std::expm1(-sigma) / denom, std::expm1(sigma) / denom};
}

double pearsonSample(const PairSample pairs)
{
    requirePairs(pairs, "pearsonSample");
    std::vector<double> x, y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (const auto& [a, b] : pairs)
    {
        x.push_back(a);
        y.push_back(b);
    }
    return correlation(x, y);
}

double kendallTauSample(const PairSample pairs)
{
    // Knight's algorithm: concordant - discordant = n0 - n1 - n2 + n3 - 2 * swaps.
    requirePairs(pairs, "kendallTauSample");
    const std::size_t n = pairs.size();
    std::vector<std::pair<double, double>> p(pairs.begin(), pairs.end());
    std::sort(p.begin(), p.end());

    const auto tiedPairs = [](std::size_t run) {return static_cast<long long>(run * (run - 1) / 2);};
    long long n1 = 0, n3 = 0;
    for (std::size_t i = 0, j = 0; i < n; i = j)
    {
        for (j = i; j < n && p[j].first == p[i].first; ++j) {}
        n1 += tiedPairs(j - i);
    }
    for (std::size_t i = 0, j = 0; i < n; i = j)
    {
        for (j = i; j < n && p[j] == p[i]; ++j) {}
        n3 += tiedPairs(j - i);
    }

    // Bottom-up merge sort on y counting strict inversions.
    std::vector<double> y(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = p[i].second;
    long long swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2)
    {
        for (std::size_t lo = 0; lo < n; lo += 2 * width)
        {
            const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi)
            {
                if (y[j] < y[i])
                {
                    swaps += static_cast<long long>(mid - i);
                    buf[k++] = y[j++];
                }
                else
                    buf[k++] = y[i++];
            }
            while (i < mid) buf[k++] = y[i++];
            while (j < hi) buf[k++] = y[j++];
        }
        std::swap(y, buf);
    }
    long long n2 = 0;
    for (std::size_t i = 0, j = 0; i < n; i = j)
    {
        for (j = i; j < n && y[j] == y[i]; ++j) {}
        n2 += tiedPairs(j - i);
    }

    const long long n0 = tiedPairs(n);
    const long long score = n0 - n1 - n2 + n3 - 2 * swaps;
    return static_cast<double>(score) / static_cast<double>(n0);
}

double spearmanRhoSample(const PairSample pairs)
{
    requirePairs(pairs, "spearmanRhoSample");
    std::vector<double> x, y;
    for (const auto& [a, b] : pairs)
    {
        x.push_back(a);
        y.push_back(b);
    }
    return correlation(midRanks(x), midRanks(y));
}

Estimate kendallTauCopula(const Copula& c, const std::size_t n, RandomStream& rng)
{
    return monteCarlo(c, n, rng, 4.0, -1.0,
                      [](const Copula& cop, double u, double v) {return cop(u, v);});
}

Estimate spearmanRhoCopula(const Copula& c, const std::size_t n, RandomStream& rng)
{
    return monteCarlo(c, n, rng, 12.0, -3.0,
                      [](const Copula&, double u, double v) {return u * v;});
}

CompatibilityResult compatibilityCheck(const double tau12, const double tau13,
                                       const double tau23, const double tol)
{
    for (const double t : {tau12, tau13, tau23})
        if (!(t >= -1.0 && t <= 1.0))
            throw DomainError("compatibilityCheck: Kendall's tau values must lie in [-1, 1]");

    const auto tau = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        if (a == 1 && b == 2) return tau12;
        if (a == 1 && b == 3) return tau13;
        return tau23;
    };

    std::array<int, 3> perm{1, 2, 3};
    do {
        const auto [i, j, k] = perm;
        const double lower = -1.0 + std::abs(tau(i, j) + tau(j, k));
        const double upper = 1.0 - std::abs(tau(i, j) - tau(j, k));
        const double value = tau(i, k);
        if (value < lower - tol || value > upper + tol)
            return CompatibilityResult{false, perm, lower, value, upper};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return CompatibilityResult{true, std::nullopt};
}

TauRhoBound tauRhoBoundCheck(const double tau, const double rho, const double tol)
{
    const double value = 3.0 * tau - 2.0 * rho;
    return TauRhoBound{value, std::abs(value) > 1.0 + tol};
}

DependenceReport dependenceReport(const PairSample pairs)
{
    requirePairs(pairs, "dependenceReport");
    DependenceReport r{};
    r.n = pairs.size();
    const double n = static_cast<double>(r.n);
    r.pearson = pearsonSample(pairs);
    r.kendallTau = kendallTauSample(pairs);
    r.spearmanRho = spearmanRhoSample(pairs);
    r.pearsonStdError = r.n > 2 ? std::sqrt(std::max(0.0, 1.0 - r.pearson * r.pearson) / (n - 2.0)) : 0.0;
    r.kendallStdError = std::sqrt(2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0)));
    r.spearmanStdError = 1.0 / std::sqrt(n - 1.0);
    r.tauRho = tauRhoBoundCheck(r.kendallTau, r.spearmanRho);
    return r;
}

}
