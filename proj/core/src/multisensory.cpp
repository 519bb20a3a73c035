#include "copkit/multisensory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "copkit/error.hpp"

namespace copkit {

namespace {
    constexpr double kViolationTol = 1e-12;

    double ecdf(const std::vector<double>& sorted, const double t)
    {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    }

    std::vector<double> sortedCopy(const std::vector<double>& xs)
    {
        std::vector<double> out(xs);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<double> resample(const std::vector<double>& xs, RandomStream& rng)
    {
        std::vector<double> out(xs.size());
        for (auto& x : out)
            x = xs[rng.index(xs.size())];
        std::sort(out.begin(), out.end());
        return out;
    }

    bool anyViolation(const std::vector<double>& t, const std::vector<double>& v,
                      const std::vector<double>& a, const std::vector<double>& va)
    {
        for (const double x : t)
        {
            const RaceBounds b = raceBounds(ecdf(v, x), ecdf(a, x));
            if (ecdf(va, x) > b.miller + kViolationTol)
                return true;
        }
        return false;
    }
}

double raceCdf(const double fv, const double fa, const Copula& c)
{
    return fv + fa - c(fv, fa);
}

double raceCdf(const Margin& visual, const Margin& auditory, const Copula& c, const double t)
{
    return raceCdf(visual.cdf(t), auditory.cdf(t), c);
}

RaceBounds raceBounds(const double fv, const double fa)
{
    if (!(fv >= 0.0 && fv <= 1.0) || !(fa >= 0.0 && fa <= 1.0))
        throw DomainError("raceBounds: CDF values must lie in [0, 1]");
    return RaceBounds{std::max(fv, fa), std::min(fv + fa, 1.0)};
}

void RTDataset::add(const std::string& condition, const double rt)
{
    if (!std::isfinite(rt) || !(rt > 0.0))
    {
        std::ostringstream os;
        os << "reaction time " << rt << " in condition '" << condition
           << "' must be finite and positive";
        throw IngestionError(os.str());
    }
    data_[condition].push_back(rt);
}

const std::vector<double>& RTDataset::at(const std::string& condition) const
{
    const auto it = data_.find(condition);
    if (it == data_.end() || it->second.empty())
        throw IngestionError("missing condition '" + condition + "'");
    return it->second;
}

RaceTestReport testRaceInequality(const RTDataset& data, const RaceTestConfig& config,
                                  RandomStream& rng)
{
    const auto& rawV = data.at(config.visualLabel);
    const auto& rawA = data.at(config.auditoryLabel);
    const auto& rawVA = data.at(config.bimodalLabel);
    if (config.gridSize < 2)
        throw DomainError("testRaceInequality: grid needs at least two points");
    if (!(config.lowerPercentile >= 0.0 && config.lowerPercentile < config.upperPercentile &&
          config.upperPercentile <= 1.0))
        throw DomainError("testRaceInequality: percentiles must satisfy 0 <= lo < hi <= 1");

    const auto v = sortedCopy(rawV);
    const auto a = sortedCopy(rawA);
    const auto va = sortedCopy(rawVA);

    std::vector<double> pooled;
    pooled.insert(pooled.end(), v.begin(), v.end());
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), va.begin(), va.end());
    const Margin pooledMargin = Margin::empirical(pooled);
    const double tLo = pooledMargin.quantile(config.lowerPercentile);
    const double tHi = pooledMargin.quantile(config.upperPercentile);

    RaceTestReport r;
    const std::size_t n = config.gridSize;
    r.maxViolation = -1.0;
    r.maxGriceUndershoot = -1.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double t = tLo + (tHi - tLo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double fv = ecdf(v, t), fa = ecdf(a, t), fva = ecdf(va, t);
        const RaceBounds b = raceBounds(fv, fa);
        r.t.push_back(t);
        r.fv.push_back(fv);
        r.fa.push_back(fa);
        r.fva.push_back(fva);
        r.grice.push_back(b.grice);
        r.miller.push_back(b.miller);
        const bool violated = fva > b.miller + kViolationTol;
        r.violation.push_back(violated);
        if (violated)
            r.violationTimes.push_back(t);
        if (fva - b.miller > r.maxViolation)
        {
            r.maxViolation = fva - b.miller;
            r.maxViolationTime = t;
        }
        r.maxGriceUndershoot = std::max(r.maxGriceUndershoot, b.grice - fva);
    }

    r.resamples = config.resamples;
    if (config.resamples > 0)
    {
        const RandomStream boot = rng.derive("bootstrap");
        std::size_t hits = 0;
        for (std::size_t b = 0; b < config.resamples; ++b)
        {
            RandomStream s = boot.derive(static_cast<std::uint64_t>(b));
            const auto rv = resample(v, s);
            const auto ra = resample(a, s);
            const auto rva = resample(va, s);
            if (anyViolation(r.t, rv, ra, rva))
                ++hits;
        }
        r.bootstrapViolationProportion =
            static_cast<double>(hits) / static_cast<double>(config.resamples);
    }
    return r;
}

void TwinParams::validate() const
{
    if (!(pi >= 0.0 && pi <= 1.0))
        throw DomainError("TWIN integration probability pi must lie in [0, 1]");
}

double twinJointCdf(const TwinParams& p, const double w1, const double w2)
{
    p.validate();
    return p.pi * p.stage1Integrated.cdf(w1) * p.stage2Integrated.cdf(w2) +
           (1.0 - p.pi) * p.stage1NotIntegrated.cdf(w1) * p.stage2NotIntegrated.cdf(w2);
}

double twinCovariance(const TwinParams& p)
{
    p.validate();
    const double m1i = p.stage1Integrated.mean(), m1n = p.stage1NotIntegrated.mean();
    const double m2i = p.stage2Integrated.mean(), m2n = p.stage2NotIntegrated.mean();
    for (const double m : {m1i, m1n, m2i, m2n})
        if (!std::isfinite(m))
            throw DomainError("twinCovariance: conditional means must be finite");
    return p.pi * (1.0 - p.pi) * (m1n - m1i) * (m2n - m2i);
}

std::vector<TwinDraw> twinSample(const TwinParams& p, RandomStream& rng, const std::size_t n)
{
    p.validate();
    std::vector<TwinDraw> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const bool integrated = rng.uniform() < p.pi;
        const double w1 = (integrated ? p.stage1Integrated : p.stage1NotIntegrated).draw(rng);
        const double w2 = (integrated ? p.stage2Integrated : p.stage2NotIntegrated).draw(rng);
        out.push_back(TwinDraw{w1, w2, w1 + w2, integrated});
    }
    return out;
}

std::pair<double, double> sampleCovariance(const std::vector<TwinDraw>& draws)
{
    const std::size_t n = draws.size();
    if (n < 2)
        throw DomainError("sampleCovariance: at least two draws required");
    double m1 = 0.0, m2 = 0.0;
    for (const auto& d : draws)
    {
        m1 += d.w1;
        m2 += d.w2;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    double mean = 0.0, m2acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double z = (draws[i].w1 - m1) * (draws[i].w2 - m2);
        const double delta = z - mean;
        mean += delta / static_cast<double>(i + 1);
        m2acc += delta * (z - mean);
    }
    const double nd = static_cast<double>(n);
    const double cov = mean * nd / (nd - 1.0);
    const double se = std::sqrt(m2acc / (nd - 1.0) / nd);
    return {cov, se};
}

RTDataset makeNullDataset(const Margin& m, const std::size_t perCondition, RandomStream& rng)
{
    RTDataset d;
    for (const char* label : {"V", "A", "VA"})
        for (const double x : m.sample(rng, perCondition))
            d.add(label, x);
    return d;
}

RTDataset makeViolatingDataset(const std::size_t perCondition, RandomStream& rng,
                               const double lo, const double hi, const double excess)
{
    if (!(excess > 0.0 && excess < 1.0) || !(lo > 10.0) || !(hi > lo))
        throw DomainError("makeViolatingDataset: need 0 < excess < 1 and 10 < lo < hi");
    const Margin unimodal = Margin::uniform(lo, hi);
    RTDataset d;
    for (const double x : unimodal.sample(rng, perCondition))
        d.add("V", x);
    for (const double x : unimodal.sample(rng, perCondition))
        d.add("A", x);
    for (std::size_t i = 0; i < perCondition; ++i)
    {
        const double u = rng.uniform();
        const double t = u <= excess ? lo - 10.0 + 10.0 * u / excess
                                     : lo + (hi - lo) * 0.5 * (u - excess);
        d.add("VA", t);
    }
    return d;
}

}
