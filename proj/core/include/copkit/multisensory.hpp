#ifndef COPKIT_MULTISENSORY_HPP_
#define COPKIT_MULTISENSORY_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "copkit/copula.hpp"
#include "copkit/margins.hpp"
#include "copkit/random.hpp"

namespace copkit {

/// F_VA(t) = F_V(t) + F_A(t) - C(F_V(t), F_A(t)) for a race between
/// coupled unimodal times.
double raceCdf(const Margin& visual, const Margin& auditory, const Copula& c, double t);

/// Same, from the unimodal CDF values at t.
double raceCdf(double fv, double fa, const Copula& c);

struct RaceBounds
{
    double grice;   ///< max{F_V, F_A}
    double miller;  ///< min{F_V + F_A, 1}
};

RaceBounds raceBounds(double fv, double fa);

/// Reaction times per condition label, in milliseconds.
class RTDataset
{
public:
    RTDataset() = default;

    /// Appends one observation; rt must be finite and positive.
    void add(const std::string& condition, double rt);

    bool has(const std::string& condition) const {return data_.count(condition) > 0;}

    /// Throws IngestionError naming the condition when absent.
    const std::vector<double>& at(const std::string& condition) const;

    const std::map<std::string, std::vector<double>>& conditions() const {return data_;}

private:
    std::map<std::string, std::vector<double>> data_;
};

struct RaceTestConfig
{
    std::string visualLabel = "V";
    std::string auditoryLabel = "A";
    std::string bimodalLabel = "VA";
    std::size_t gridSize = 100;
    double lowerPercentile = 0.01;
    double upperPercentile = 0.99;
    std::size_t resamples = 1000;
};

struct RaceTestReport
{
    std::vector<double> t;
    std::vector<double> fv, fa, fva;
    std::vector<double> grice, miller;
    std::vector<bool> violation;       ///< F_VA(t) > Miller(t)
    std::vector<double> violationTimes;
    double maxViolation = 0.0;         ///< max over t of F_VA - Miller (may be negative)
    double maxViolationTime = 0.0;
    double maxGriceUndershoot = 0.0;   ///< max over t of Grice - F_VA
    std::size_t resamples = 0;
    double bootstrapViolationProportion = 0.0;

    bool violated() const {return !violationTimes.empty();}
};

/// Evaluates empirical CDFs on gridSize equally spaced points spanning the
/// pooled percentile range and flags t with F_VA(t) > Miller(t). The
/// bootstrap resamples every condition with replacement and reports the
/// fraction of resamples with a violation at any grid point.
RaceTestReport testRaceInequality(const RTDataset& data, const RaceTestConfig& config,
                                  RandomStream& rng);

/// Integration probability and the four conditional stage margins.
struct TwinParams
{
    double pi;
    Margin stage1Integrated;     ///< F_I
    Margin stage1NotIntegrated;  ///< F_{I^c}
    Margin stage2Integrated;     ///< G_I
    Margin stage2NotIntegrated;  ///< G_{I^c}

    /// Throws DomainError unless pi lies in [0, 1].
    void validate() const;
};

/// pi F_I(w1) G_I(w2) + (1 - pi) F_{I^c}(w1) G_{I^c}(w2)
double twinJointCdf(const TwinParams& p, double w1, double w2);

/// pi (1 - pi) {E(W1|I^c) - E(W1|I)} {E(W2|I^c) - E(W2|I)}
double twinCovariance(const TwinParams& p);

struct TwinDraw
{
    double w1, w2, rt;
    bool integrated;
};

std::vector<TwinDraw> twinSample(const TwinParams& p, RandomStream& rng, std::size_t n);

/// Sample covariance of (w1, w2) and its Monte Carlo standard error.
std::pair<double, double> sampleCovariance(const std::vector<TwinDraw>& draws);

/// Null dataset: all three conditions drawn from one margin.
RTDataset makeNullDataset(const Margin& m, std::size_t perCondition, RandomStream& rng);

/// Dataset whose bimodal CDF exceeds the Miller bound by `excess` in the
/// lower tail. V and A are uniform(lo, hi); VA is drawn by inverse
/// transform from G(t) = min{2 F(t) + excess, 1} above lo, with the excess
/// mass spread linearly over [lo - 10, lo].
RTDataset makeViolatingDataset(std::size_t perCondition, RandomStream& rng,
                               double lo = 200.0, double hi = 400.0, double excess = 0.1);

}

#endif // COPKIT_MULTISENSORY_HPP_
