#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "copkit/error.hpp"
#include "copkit/multisensory.hpp"
#include "oracles.hpp"

using copkit::Copula;
using copkit::Margin;
using copkit::RandomStream;
using copkit::TwinParams;

namespace {

TwinParams workedExample(const double pi = 0.5)
{
    return TwinParams{pi, Margin::uniform(90, 110), Margin::uniform(110, 130),
                      Margin::uniform(190, 210), Margin::uniform(170, 190)};
}

}

TEST_CASE("race cdf examples")
{
    CHECK(copkit::raceCdf(0.6, 0.5, Copula::independence()) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(copkit::raceCdf(0.6, 0.5, Copula::comonotone()) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(copkit::raceCdf(0.6, 0.5, Copula::countermonotone()) == doctest::Approx(1.0).epsilon(1e-12));
    // Equals the dual of the copula at the margins.
    const auto gb = Copula::gumbelBev(1.3);
    CHECK(copkit::raceCdf(0.3, 0.45, gb) == copkit::copulaTransforms(gb, 0.3, 0.45).dual);
}

TEST_CASE("race bounds examples")
{
    auto b = copkit::raceBounds(0.6, 0.5);
    CHECK(b.grice == 0.6);
    CHECK(b.miller == 1.0);
    b = copkit::raceBounds(0.0, 0.0);
    CHECK(b.grice == 0.0);
    CHECK(b.miller == 0.0);
    b = copkit::raceBounds(0.9, 0.9);
    CHECK(b.grice == 0.9);
    CHECK(b.miller == 1.0);
    CHECK_THROWS_AS(copkit::raceBounds(1.2, 0.1), copkit::DomainError);
    CHECK_THROWS_AS(copkit::raceBounds(0.2, -0.1), copkit::DomainError);
}

TEST_CASE("race cdf stays within the bounds and is nondecreasing")
{
    std::mt19937_64 gen(100);
    std::uniform_real_distribution<double> unif(0, 1);
    const std::vector<Margin> ms{Margin::exponential(0.01), Margin::lognormal(5.5, 0.3),
                                Margin::uniform(150, 450), Margin::gumbelStandard()};
    const std::vector<Copula> cs{Copula::independence(), Copula::comonotone(), Copula::countermonotone(),
                                 Copula::gumbelBev(0.7), Copula::frechetMixture(0.4)};
    for (int i = 0; i < 1000; ++i)
    {
        const auto& v = ms[gen() % ms.size()];
        const auto& a = ms[gen() % ms.size()];
        const auto& c = cs[gen() % cs.size()];
        const double t = 600 * unif(gen) - 5;
        const double f = copkit::raceCdf(v, a, c, t);
        const auto b = copkit::raceBounds(v.cdf(t), a.cdf(t));
        CHECK(f >= b.grice - 1e-12);
        CHECK(f <= b.miller + 1e-12);
        CHECK(copkit::raceCdf(v, a, c, t + 1.0) >= f - 1e-12);
    }
}

TEST_CASE("dataset ingestion")
{
    copkit::RTDataset d;
    d.add("V", 250.0);
    CHECK(d.has("V"));
    CHECK_FALSE(d.has("A"));
    CHECK_THROWS_AS(d.add("V", -1.0), copkit::IngestionError);
    CHECK_THROWS_AS(d.add("V", std::nan("")), copkit::IngestionError);
    try {
        (void)d.at("VA");
        FAIL("expected an ingestion error");
    } catch (const copkit::IngestionError& e) {
        CHECK(std::string(e.what()).find("'VA'") != std::string::npos);
    }
    RandomStream rng(1);
    CHECK_THROWS_AS(copkit::testRaceInequality(d, {}, rng), copkit::IngestionError);
}

TEST_CASE("violating dataset is flagged")
{
    RandomStream rng(4);
    const auto d = copkit::makeViolatingDataset(1000, rng);
    copkit::RaceTestConfig cfg;
    cfg.resamples = 200;
    const auto r = copkit::testRaceInequality(d, cfg, rng);
    CHECK(r.violated());
    CHECK(r.maxViolation > 0.05);
    CHECK(r.maxViolationTime < 230.0);
    CHECK(r.bootstrapViolationProportion > 0.9);
}

TEST_CASE("race report invariants")
{
    RandomStream rng(6);
    const auto d = copkit::makeNullDataset(Margin::lognormal(5.7, 0.25), 500, rng);
    copkit::RaceTestConfig cfg;
    cfg.resamples = 0;
    const auto r = copkit::testRaceInequality(d, cfg, rng);
    REQUIRE(r.t.size() == 100);
    for (std::size_t i = 0; i < r.t.size(); ++i)
    {
        CHECK(r.grice[i] <= r.miller[i]);
        for (const double f : {r.fv[i], r.fa[i], r.fva[i]})
        {
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }
        if (i > 0)
        {
            CHECK(r.t[i] > r.t[i - 1]);
            CHECK(r.fv[i] >= r.fv[i - 1]);
            CHECK(r.fva[i] >= r.fva[i - 1]);
        }
    }
}

TEST_CASE("VA identical in law to V shows no Grice undershoot beyond noise")
{
    RandomStream rng(7);
    copkit::RTDataset d;
    const auto v = Margin::uniform(200, 300), a = Margin::uniform(260, 400);
    for (const double x : v.sample(rng, 2000)) d.add("V", x);
    for (const double x : a.sample(rng, 2000)) d.add("A", x);
    for (const double x : v.sample(rng, 2000)) d.add("VA", x);
    copkit::RaceTestConfig cfg;
    cfg.resamples = 0;
    const auto r = copkit::testRaceInequality(d, cfg, rng);
    // Kolmogorov-Smirnov scale for two samples of 2000 at 0.01.
    CHECK(r.maxGriceUndershoot < 1.63 * std::sqrt(2.0 / 2000.0));
}

TEST_CASE("null datasets exceed the Miller bound only within sampling noise")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        RandomStream rng(seed);
        const auto d = copkit::makeNullDataset(Margin::lognormal(5.6, 0.3), 1000, rng);
        copkit::RaceTestConfig cfg;
        cfg.resamples = 0;
        const auto r = copkit::testRaceInequality(d, cfg, rng);
        // Kolmogorov-Smirnov scale for two samples of 1000 at 0.01.
        CHECK(r.maxViolation < 1.63 * std::sqrt(2.0 / 1000.0));
    }
}

TEST_CASE("race test is deterministic for a fixed seed")
{
    RandomStream g(9);
    const auto d = copkit::makeViolatingDataset(200, g);
    copkit::RaceTestConfig cfg;
    cfg.resamples = 50;
    RandomStream a(5), b(5);
    const auto ra = copkit::testRaceInequality(d, cfg, a), rb = copkit::testRaceInequality(d, cfg, b);
    CHECK(ra.bootstrapViolationProportion == rb.bootstrapViolationProportion);
    CHECK(ra.fva == rb.fva);
}

TEST_CASE("twin joint cdf examples")
{
    auto p = workedExample(1.0);
    CHECK(copkit::twinJointCdf(p, 100, 200) == doctest::Approx(0.25));
    p.pi = 0.0;
    CHECK(copkit::twinJointCdf(p, 120, 180) == doctest::Approx(0.25));
    CHECK(copkit::twinJointCdf(p, 100, 200) == 0.0);
    const TwinParams u{0.5, Margin::uniform(0, 1), Margin::uniform(0, 1), Margin::uniform(0, 1), Margin::uniform(0, 1)};
    CHECK(copkit::twinJointCdf(u, 0.5, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("twin joint cdf margin is the mixture margin")
{
    const auto p = workedExample(0.3);
    const double big = 1e6;
    for (double w1 = 80; w1 <= 140; w1 += 2.5)
        CHECK(copkit::twinJointCdf(p, w1, big) ==
              doctest::Approx(0.3 * p.stage1Integrated.cdf(w1) + 0.7 * p.stage1NotIntegrated.cdf(w1)).epsilon(1e-12));
}

TEST_CASE("twin covariance examples")
{
    CHECK(copkit::twinCovariance(workedExample()) == doctest::Approx(-100.0));
    CHECK(copkit::twinCovariance(workedExample(0.0)) == 0.0);
    CHECK(copkit::twinCovariance(workedExample(1.0)) == 0.0);
    auto p = workedExample();
    p.stage1NotIntegrated = p.stage1Integrated;
    CHECK(copkit::twinCovariance(p) == 0.0);
    p.pi = 1.5;
    CHECK_THROWS_AS(copkit::twinCovariance(p), copkit::DomainError);
}

TEST_CASE("twin sample examples")
{
    RandomStream rng(42);
    const auto draws = copkit::twinSample(workedExample(), rng, 100000);
    const auto [cov, se] = copkit::sampleCovariance(draws);
    CHECK(std::abs(cov + 100.0) < 3 * se);
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(draws[i].rt == draws[i].w1 + draws[i].w2);

    RandomStream r1(1);
    const auto one = copkit::twinSample(workedExample(1.0), r1, 100000);
    for (const auto& d : one) CHECK(d.integrated);
    const auto [c1, s1] = copkit::sampleCovariance(one);
    CHECK(std::abs(c1) < 3 * s1);

    RandomStream a(3), b(3);
    const auto da = copkit::twinSample(workedExample(), a, 100), db = copkit::twinSample(workedExample(), b, 100);
    for (std::size_t i = 0; i < da.size(); ++i)
        CHECK(da[i].rt == db[i].rt);
}

TEST_CASE("sample covariance matches an independent computation")
{
    RandomStream rng(11);
    const auto draws = copkit::twinSample(workedExample(0.4), rng, 5000);
    std::vector<double> prods;
    double m1 = 0, m2 = 0;
    for (const auto& d : draws) {m1 += d.w1; m2 += d.w2;}
    m1 /= draws.size();
    m2 /= draws.size();
    for (const auto& d : draws) prods.push_back((d.w1 - m1) * (d.w2 - m2));
    const auto [mean, err] = oracle::meanAndError(prods);
    const auto [cov, se] = copkit::sampleCovariance(draws);
    CHECK(cov == doctest::Approx(mean * draws.size() / (draws.size() - 1.0)).epsilon(1e-9));
    CHECK(se == doctest::Approx(err).epsilon(1e-9));
}
