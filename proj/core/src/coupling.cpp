#include "copkit/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "copkit/error.hpp"

namespace copkit {

namespace {
    constexpr double kMassTol = 1e-12;

    // Cumulative-sum inversion; the last index with positive mass absorbs
    // any rounding shortfall in the total.
    std::size_t drawIndex(const std::vector<double>& probs, RandomStream& rng)
    {
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t lastPositive = 0;
        for (std::size_t k = 0; k < probs.size(); ++k)
        {
            if (probs[k] <= 0.0)
                continue;
            lastPositive = k;
            acc += probs[k];
            if (u < acc)
                return k;
        }
        return lastPositive;
    }
}

Pmf::Pmf(std::vector<double> support, std::vector<double> probs)
{
    if (support.empty())
        throw DomainError("pmf: support is empty");
    if (support.size() != probs.size())
        throw ShapeError("pmf: support and probability lists differ in length");

    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) {return support[a] < support[b];});

    double total = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        const double x = support[order[k]];
        const double p = probs[order[k]];
        if (!std::isfinite(x))
            throw DomainError("pmf: support values must be finite");
        if (!(p >= 0.0) || !std::isfinite(p))
            throw DomainError("pmf: probabilities must be nonnegative");
        if (k > 0 && x == support_.back())
        {
            std::ostringstream os;
            os << "pmf: duplicate support value " << x;
            throw DomainError(os.str());
        }
        support_.push_back(x);
        probs_.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > kMassTol)
    {
        std::ostringstream os;
        os.precision(17);
        os << "pmf: probabilities sum to " << total << ", not 1";
        throw DomainError(os.str());
    }
}

double Pmf::at(const double x) const
{
    const auto it = std::lower_bound(support_.begin(), support_.end(), x);
    if (it == support_.end() || *it != x)
        return 0.0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
}

double Pmf::draw(RandomStream& rng) const
{
    return support_[drawIndex(probs_, rng)];
}

MergedSupport mergeSupports(const std::span<const Pmf> pmfs)
{
    MergedSupport out;
    for (const auto& pmf : pmfs)
        out.values.insert(out.values.end(), pmf.support().begin(), pmf.support().end());
    std::sort(out.values.begin(), out.values.end());
    out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());

    out.probs.reserve(pmfs.size());
    for (const auto& pmf : pmfs)
    {
        std::vector<double> row(out.values.size());
        for (std::size_t k = 0; k < out.values.size(); ++k)
            row[k] = pmf.at(out.values[k]);
        out.probs.push_back(std::move(row));
    }
    return out;
}

std::vector<CoupledDraw> CoupledSampler::draw(RandomStream& rng, const std::size_t n) const
{
    std::vector<CoupledDraw> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(draw_(rng));
    return out;
}

BernoulliCoupling bernoulliCoupling(const double p, const double q)
{
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw DomainError("bernoulliCoupling: p and q must lie in [0, 1]");
    if (p > q)
        throw OrderError("bernoulliCoupling: requires p <= q; swap the arguments");

    CoupledSampler sampler(
        {Margin::bernoulli(p).describe(), Margin::bernoulli(q).describe()},
        [p, q](RandomStream& rng) {
            const double u = rng.uniform();
            return CoupledDraw{{u <= p ? 1.0 : 0.0, u <= q ? 1.0 : 0.0}, false};
        });
    return BernoulliCoupling{1.0 - q, q - p, 0.0, p, p * (1.0 - q), std::move(sampler)};
}

CoupledSampler quantileCoupling(std::vector<Margin> margins)
{
    if (margins.empty())
        throw DomainError("quantileCoupling: at least one margin required");
    std::vector<std::string> names;
    for (const auto& m : margins)
        names.push_back(m.describe());
    return CoupledSampler(std::move(names), [ms = std::move(margins)](RandomStream& rng) {
        const double u = rng.uniform();
        CoupledDraw d;
        d.values.reserve(ms.size());
        for (const auto& m : ms)
            d.values.push_back(m.quantile(u));
        return d;
    });
}

double couplingEventBound(const std::span<const Pmf> pmfs)
{
    if (pmfs.empty())
        throw DomainError("couplingEventBound: no pmfs given");
    const MergedSupport merged = mergeSupports(pmfs);
    double c = 0.0;
    for (std::size_t k = 0; k < merged.values.size(); ++k)
    {
        double m = merged.probs[0][k];
        for (const auto& row : merged.probs)
            m = std::min(m, row[k]);
        c += m;
    }
    return std::clamp(c, 0.0, 1.0);
}

CoupledSampler maximalCoupling(const std::span<const Pmf> pmfs)
{
    if (pmfs.size() < 2)
        throw DomainError("maximalCoupling: at least two pmfs required");

    const MergedSupport merged = mergeSupports(pmfs);
    const std::size_t nv = merged.values.size();
    const std::size_t dim = pmfs.size();

    std::vector<double> overlap(nv);
    double c = 0.0;
    for (std::size_t k = 0; k < nv; ++k)
    {
        double m = merged.probs[0][k];
        for (const auto& row : merged.probs)
            m = std::min(m, row[k]);
        overlap[k] = m;
        c += m;
    }

    std::vector<std::string> names;
    for (const auto& pmf : pmfs)
    {
        std::ostringstream os;
        os << "pmf(" << pmf.support().size() << " atoms)";
        names.push_back(os.str());
    }

    const auto& values = merged.values;

    if (c <= 0.0)
    {
        // disjoint supports: independent coordinates, empty coupling event
        return CoupledSampler(std::move(names), [values, probs = merged.probs](RandomStream& rng) {
            CoupledDraw d;
            for (const auto& row : probs)
                d.values.push_back(values[drawIndex(row, rng)]);
            return d;
        });
    }

    std::vector<double> common(nv);
    for (std::size_t k = 0; k < nv; ++k)
        common[k] = overlap[k] / c;

    if (c >= 1.0 - kMassTol)
    {
        // identical laws: coupling event is the whole space
        return CoupledSampler(std::move(names), [values, common, dim](RandomStream& rng) {
            const double v = values[drawIndex(common, rng)];
            return CoupledDraw{std::vector<double>(dim, v), true};
        });
    }

    std::vector<std::vector<double>> residual(dim, std::vector<double>(nv));
    for (std::size_t i = 0; i < dim; ++i)
    {
        double total = 0.0;
        for (std::size_t k = 0; k < nv; ++k)
        {
            double w = (merged.probs[i][k] - c * common[k]) / (1.0 - c);
            if (w < -kMassTol)
            {
                std::ostringstream os;
                os << "maximalCoupling: residual mass " << w << " at value " << values[k];
                throw ConsistencyError(os.str());
            }
            w = std::max(w, 0.0);
            residual[i][k] = w;
            total += w;
        }
        if (!(total > 0.0))
            throw ConsistencyError("maximalCoupling: residual law has no mass");
        for (auto& w : residual[i])
            w /= total;
    }

    return CoupledSampler(std::move(names),
        [values, common, residual = std::move(residual), c, dim](RandomStream& rng) {
            CoupledDraw d;
            if (rng.uniform() < c)
            {
                d.values.assign(dim, values[drawIndex(common, rng)]);
                d.coupled = true;
            }
            else
            {
                for (const auto& row : residual)
                    d.values.push_back(values[drawIndex(row, rng)]);
            }
            return d;
        });
}

double totalVariation(const Pmf& a, const Pmf& b)
{
    const std::array<Pmf, 2> pair{a, b};
    const MergedSupport merged = mergeSupports(pair);
    double sum = 0.0;
    for (std::size_t k = 0; k < merged.values.size(); ++k)
        sum += std::abs(merged.probs[0][k] - merged.probs[1][k]);
    return 0.5 * sum;
}

DominanceReport strassenMonotoneCoupling(const Margin& f, const Margin& g,
                                         const std::size_t gridSize, const double tol)
{
    const double lo = std::min(f.quantile(0.001), g.quantile(0.001));
    const double hi = std::max(f.quantile(0.999), g.quantile(0.999));

    DominanceReport report;
    auto& grid = report.grid;
    const std::size_t n = std::max<std::size_t>(gridSize, 2);
    for (std::size_t i = 0; i < n; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    for (const auto& m : {f, g})
        for (const double a : m.atoms())
            grid.push_back(a);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    report.maxExcess = -1.0;
    for (const double x : grid)
    {
        const double excess = g.cdf(x) - f.cdf(x);
        report.maxExcess = std::max(report.maxExcess, excess);
        if (excess > tol && !report.firstViolation)
            report.firstViolation = x;
    }
    report.holds = !report.firstViolation.has_value();
    if (report.holds)
        report.coupling = quantileCoupling({f, g});
    return report;
}

}
