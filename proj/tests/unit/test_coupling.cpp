#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "copkit/coupling.hpp"
#include "copkit/dependence.hpp"
#include "copkit/error.hpp"
#include "oracles.hpp"

using copkit::Margin;
using copkit::Pmf;
using copkit::RandomStream;

namespace {

Pmf bernoulliPmf(const double p)
{
    return Pmf({0.0, 1.0}, {1.0 - p, p});
}

// Random pmf on a random subset of {0, ..., 19}.
Pmf randomPmf(std::mt19937_64& gen)
{
    std::uniform_int_distribution<int> size(1, 20);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> all(20);
    for (int i = 0; i < 20; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), gen);
    const int k = size(gen);
    std::vector<double> support(all.begin(), all.begin() + k), probs(k);
    double total = 0.0;
    for (auto& p : probs) total += (p = unif(gen));
    for (auto& p : probs) p /= total;
    // Force an exact total of 1 on the last entry.
    double head = 0.0;
    for (int i = 0; i + 1 < k; ++i) head += probs[i];
    probs[k - 1] = 1.0 - head;
    return Pmf(support, probs);
}

std::map<double, double> asMap(const Pmf& p)
{
    std::map<double, double> m;
    for (std::size_t i = 0; i < p.support().size(); ++i) m[p.support()[i]] = p.probs()[i];
    return m;
}

double bruteMinSum(const Pmf& a, const Pmf& b)
{
    double s = 0.0;
    for (int x = -5; x < 40; ++x) s += std::min(a.at(x), b.at(x));
    return s;
}

}

TEST_CASE("pmf validation")
{
    CHECK_THROWS_AS(Pmf({0.0, 0.0}, {0.5, 0.5}), copkit::DomainError);
    CHECK_THROWS_AS(Pmf({0.0, 1.0}, {-0.1, 1.1}), copkit::DomainError);
    CHECK_THROWS_AS(Pmf({0.0, 1.0}, {0.5, 0.6}), copkit::DomainError);
    CHECK_THROWS_AS(Pmf({0.0}, {0.5, 0.5}), copkit::ShapeError);
    const Pmf p({3.0, 1.0}, {0.25, 0.75});
    CHECK(p.support() == std::vector<double>{1.0, 3.0});
    CHECK(p.at(3.0) == 0.25);
    CHECK(p.at(2.0) == 0.0);
}

TEST_CASE("bernoulli coupling examples")
{
    const auto c = copkit::bernoulliCoupling(0.3, 0.6);
    CHECK(c.p00 == doctest::Approx(0.4));
    CHECK(c.p01 == doctest::Approx(0.3));
    CHECK(c.p11 == doctest::Approx(0.3));
    CHECK(c.p10 == 0.0);
    CHECK(c.covariance == doctest::Approx(0.12));

    const auto same = copkit::bernoulliCoupling(0.5, 0.5);
    CHECK(same.p01 == 0.0);
    RandomStream rng(3);
    for (const auto& d : same.sampler.draw(rng, 1000))
        CHECK(d.values[0] == d.values[1]);

    const auto edge = copkit::bernoulliCoupling(0.0, 1.0);
    CHECK(edge.p00 == 0.0);
    CHECK(edge.p01 == 1.0);
    CHECK(edge.p10 == 0.0);
    CHECK(edge.p11 == 0.0);
    CHECK(edge.covariance == 0.0);

    CHECK_THROWS_AS(copkit::bernoulliCoupling(0.7, 0.2), copkit::OrderError);
    CHECK_THROWS_AS(copkit::bernoulliCoupling(-0.1, 0.2), copkit::DomainError);
    CHECK_THROWS_AS(copkit::bernoulliCoupling(0.1, 1.2), copkit::DomainError);
}

TEST_CASE("bernoulli coupling draws never give (1, 0) and match margins")
{
    const auto c = copkit::bernoulliCoupling(0.25, 0.55);
    RandomStream rng(8);
    std::vector<double> xs, ys;
    for (const auto& d : c.sampler.draw(rng, 10000))
    {
        CHECK_FALSE((d.values[0] == 1.0 && d.values[1] == 0.0));
        xs.push_back(d.values[0]);
        ys.push_back(d.values[1]);
    }
    CHECK(oracle::chiSquarePValue(xs, {{0.0, 0.75}, {1.0, 0.25}}) > 0.01);
    CHECK(oracle::chiSquarePValue(ys, {{0.0, 0.45}, {1.0, 0.55}}) > 0.01);
}

TEST_CASE("quantile coupling examples")
{
    RandomStream rng(1);
    const auto same = copkit::quantileCoupling({Margin::uniform(0, 1), Margin::uniform(0, 1)});
    for (const auto& d : same.draw(rng, 1000))
        CHECK(d.values[0] == d.values[1]);

    const auto expo = copkit::quantileCoupling({Margin::exponential(1.0), Margin::exponential(0.5)});
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> xs, ys;
    for (const auto& d : expo.draw(rng, 10000))
    {
        pairs.emplace_back(d.values[0], d.values[1]);
        xs.push_back(d.values[0]);
        ys.push_back(d.values[1]);
    }
    CHECK(copkit::pearsonSample(pairs) > 0.0);
    CHECK(oracle::ksStatistic(xs, [](double x) {return x <= 0 ? 0.0 : 1.0 - std::exp(-x);})
          < oracle::ksCritical01(xs.size()));
    CHECK(oracle::ksStatistic(ys, [](double x) {return x <= 0 ? 0.0 : 1.0 - std::exp(-0.5 * x);})
          < oracle::ksCritical01(ys.size()));

    const auto one = copkit::quantileCoupling({Margin::uniform(0, 1)});
    CHECK(one.dimension() == 1);
    CHECK_THROWS_AS(copkit::quantileCoupling({}), copkit::DomainError);
}

TEST_CASE("coupling event bound examples")
{
    const std::vector<Pmf> bern{bernoulliPmf(0.3), bernoulliPmf(0.6)};
    CHECK(copkit::couplingEventBound(bern) == doctest::Approx(0.7));
    const std::vector<Pmf> same{bernoulliPmf(0.3), bernoulliPmf(0.3)};
    CHECK(copkit::couplingEventBound(same) == doctest::Approx(1.0));
    const std::vector<Pmf> disjoint{Pmf({0.0, 1.0}, {0.5, 0.5}), Pmf({2.0, 3.0}, {0.5, 0.5})};
    CHECK(copkit::couplingEventBound(disjoint) == 0.0);
    CHECK_THROWS_AS(copkit::couplingEventBound(std::vector<Pmf>{}), copkit::DomainError);
}

TEST_CASE("total variation examples")
{
    CHECK(std::abs(copkit::totalVariation(bernoulliPmf(0.3), bernoulliPmf(0.6)) - 0.3) < 1e-12);
    CHECK(copkit::totalVariation(bernoulliPmf(0.3), bernoulliPmf(0.3)) == 0.0);
    CHECK(copkit::totalVariation(Pmf({0.0}, {1.0}), Pmf({1.0}, {1.0})) == 1.0);
}

TEST_CASE("TV duality and bound against a brute-force oracle")
{
    std::mt19937_64 gen(404);
    for (int i = 0; i < 200; ++i)
    {
        const auto a = randomPmf(gen), b = randomPmf(gen);
        const std::vector<Pmf> ab{a, b};
        const double c = copkit::couplingEventBound(ab);
        CHECK(std::abs(c - bruteMinSum(a, b)) < 1e-12);
        CHECK(std::abs(copkit::totalVariation(a, b) + c - 1.0) < 1e-12);
    }
}

TEST_CASE("maximal coupling examples")
{
    const std::vector<Pmf> bern{bernoulliPmf(0.3), bernoulliPmf(0.6)};
    const auto s = copkit::maximalCoupling(bern);
    RandomStream rng(42);
    int hits = 0;
    std::vector<double> xs, ys;
    for (const auto& d : s.draw(rng, 10000))
    {
        if (d.coupled)
        {
            ++hits;
            CHECK(d.values[0] == d.values[1]);
        }
        xs.push_back(d.values[0]);
        ys.push_back(d.values[1]);
    }
    CHECK(std::abs(hits / 10000.0 - 0.7) < 0.015);
    CHECK(oracle::chiSquarePValue(xs, asMap(bern[0])) > 0.01);
    CHECK(oracle::chiSquarePValue(ys, asMap(bern[1])) > 0.01);

    const std::vector<Pmf> same{Pmf({1.0, 2.0, 5.0}, {0.2, 0.3, 0.5}), Pmf({1.0, 2.0, 5.0}, {0.2, 0.3, 0.5})};
    for (const auto& d : copkit::maximalCoupling(same).draw(rng, 1000))
    {
        CHECK(d.coupled);
        CHECK(d.values[0] == d.values[1]);
    }

    const std::vector<Pmf> disjoint{Pmf({0.0, 1.0}, {0.5, 0.5}), Pmf({2.0, 3.0}, {0.5, 0.5})};
    int joint[2][2] = {{0, 0}, {0, 0}};
    for (const auto& d : copkit::maximalCoupling(disjoint).draw(rng, 10000))
    {
        CHECK_FALSE(d.coupled);
        ++joint[static_cast<int>(d.values[0])][static_cast<int>(d.values[1]) - 2];
    }
    // Independence: each of the four cells holds a quarter.
    std::vector<double> cells;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < joint[i][j]; ++r) cells.push_back(2.0 * i + j);
    CHECK(oracle::chiSquarePValue(cells, {{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}}) > 0.01);

    CHECK_THROWS_AS(copkit::maximalCoupling(std::vector<Pmf>{bernoulliPmf(0.5)}), copkit::DomainError);
}

TEST_CASE("maximal coupling of three pmfs keeps margins and attains the bound")
{
    const std::vector<Pmf> pmfs{Pmf({0, 1, 2}, {0.2, 0.5, 0.3}), Pmf({1, 2, 3}, {0.4, 0.4, 0.2}),
                                Pmf({0, 1, 2, 3}, {0.1, 0.3, 0.5, 0.1})};
    const double c = copkit::couplingEventBound(pmfs);
    CHECK(c == doctest::Approx(0.0 + 0.3 + 0.3 + 0.0));
    RandomStream rng(17);
    const std::size_t n = 20000;
    std::vector<std::vector<double>> cols(3);
    int hits = 0;
    for (const auto& d : copkit::maximalCoupling(pmfs).draw(rng, n))
    {
        hits += d.coupled;
        for (int i = 0; i < 3; ++i) cols[i].push_back(d.values[i]);
    }
    const double sigma = std::sqrt(c * (1 - c) / n);
    CHECK(std::abs(hits / static_cast<double>(n) - c) < 3 * sigma);
    for (int i = 0; i < 3; ++i)
        CHECK(oracle::chiSquarePValue(cols[i], asMap(pmfs[i])) > 0.01);
}

TEST_CASE("coupling event inequality for quantile couplings of random pmfs")
{
    // Quantile coupling is a coupling, so P(equal) cannot exceed the bound.
    std::mt19937_64 gen(5);
    for (int t = 0; t < 20; ++t)
    {
        const auto a = randomPmf(gen), b = randomPmf(gen);
        const std::vector<Pmf> ab{a, b};
        const double c = copkit::couplingEventBound(ab);
        RandomStream rng(t);
        int eq = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
        {
            const double u = rng.uniform();
            // Inverse cdf of a and b with one uniform.
            auto inv = [u](const Pmf& p) {
                double acc = 0.0;
                for (std::size_t k = 0; k < p.support().size(); ++k)
                    if ((acc += p.probs()[k]) >= u) return p.support()[k];
                return p.support().back();
            };
            eq += inv(a) == inv(b);
        }
        CHECK(eq / static_cast<double>(n) <= c + 3 * std::sqrt(0.25 / n) + 1e-12);
    }
}

TEST_CASE("strassen examples")
{
    const auto r = copkit::strassenMonotoneCoupling(Margin::exponential(1.0), Margin::exponential(0.5));
    CHECK(r.holds);
    CHECK(r.grid.size() >= 1000);
    REQUIRE(r.coupling.has_value());
    RandomStream rng(2);
    for (const auto& d : r.coupling->draw(rng, 5000))
        CHECK(d.values[0] <= d.values[1]);
    for (int i = 1; i < 1000; ++i)
    {
        const double u = i / 1000.0;
        CHECK(-std::log1p(-u) <= -2.0 * std::log1p(-u));
    }

    const auto same = copkit::strassenMonotoneCoupling(Margin::lognormal(0, 1), Margin::lognormal(0, 1));
    CHECK(same.holds);
    for (const auto& d : same.coupling->draw(rng, 1000))
        CHECK(d.values[0] == d.values[1]);

    const auto fail = copkit::strassenMonotoneCoupling(Margin::uniform(0, 1), Margin::uniform(-1, 0));
    CHECK_FALSE(fail.holds);
    CHECK_FALSE(fail.coupling.has_value());
    REQUIRE(fail.firstViolation.has_value());
    CHECK(*fail.firstViolation >= -1.0);
    CHECK(*fail.firstViolation < 0.0);
    CHECK(fail.maxExcess == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("strassen with discrete margins")
{
    const std::vector<double> lo{1.0, 2.0, 3.0}, hi{2.0, 3.0, 4.0};
    const auto r = copkit::strassenMonotoneCoupling(Margin::empirical(lo), Margin::empirical(hi));
    CHECK(r.holds);
    RandomStream rng(4);
    for (const auto& d : r.coupling->draw(rng, 2000))
        CHECK(d.values[0] <= d.values[1]);
    const auto bad = copkit::strassenMonotoneCoupling(Margin::bernoulli(0.6), Margin::bernoulli(0.4));
    CHECK_FALSE(bad.holds);
}

TEST_CASE("coupled samplers are deterministic given the seed")
{
    const std::vector<Pmf> pmfs{bernoulliPmf(0.2), bernoulliPmf(0.9)};
    const auto s = copkit::maximalCoupling(pmfs);
    RandomStream a(99), b(99);
    const auto da = s.draw(a, 200), db = s.draw(b, 200);
    for (std::size_t i = 0; i < da.size(); ++i)
    {
        CHECK(da[i].values == db[i].values);
        CHECK(da[i].coupled == db[i].coupled);
    }
}
