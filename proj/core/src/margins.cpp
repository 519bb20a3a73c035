#include "copkit/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "copkit/error.hpp"
#include "copkit/numeric.hpp"

namespace copkit {

namespace {
    template <class... Ts> struct overloaded : Ts... {using Ts::operator()...;};
    template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

    void requireFinite(const double x, const char* what)
    {
        if (!std::isfinite(x))
            throw DomainError(std::string(what) + ": argument must be finite");
    }

    // Smallest double x with cdf(x) >= u, starting from an estimate within
    // a few ulps. Requires 0 < u < 1.
    template <class Cdf>
    double snapToInverse(const double estimate, const double u, const Cdf& cdf)
    {
        double lo = estimate, hi = estimate;
        double step = std::max(std::abs(estimate) * 0x1p-52, 0x1p-1074);
        if (cdf(estimate) >= u)
            while (cdf(lo) >= u) {lo = estimate - step; step *= 2.0;}
        else
            while (cdf(hi) < u) {hi = estimate + step; step *= 2.0;}
        while (true)
        {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi)
                return hi;
            (cdf(mid) >= u ? hi : lo) = mid;
        }
    }

    [[noreturn]] void infiniteQuantile(const char* fam, const double u)
    {
        std::ostringstream os;
        os << "quantile(" << u << ") of " << fam << " margin is infinite";
        throw InfiniteQuantileError(os.str());
    }
}

Margin Margin::uniform(const double lower, const double upper)
{
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
        throw DomainError("uniform margin requires finite lower < upper");
    return Margin(family::Uniform{lower, upper});
}

Margin Margin::exponential(const double rate)
{
    if (!std::isfinite(rate) || !(rate > 0.0))
        throw DomainError("exponential margin requires rate > 0");
    return Margin(family::Exponential{rate});
}

Margin Margin::lognormal(const double mu, const double sigma)
{
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0))
        throw DomainError("lognormal margin requires finite mu and sigma > 0");
    return Margin(family::Lognormal{mu, sigma});
}

Margin Margin::gumbelStandard()
{
    return Margin(family::GumbelStandard{});
}

Margin Margin::bernoulli(const double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("bernoulli margin requires p in [0, 1]");
    return Margin(family::Bernoulli{p});
}

Margin Margin::empirical(const std::span<const double> xs)
{
    if (xs.empty())
        throw IngestionError("empirical margin: sample is empty");
    std::vector<double> sorted(xs.begin(), xs.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!std::isfinite(sorted[i]))
        {
            std::ostringstream os;
            os << "empirical margin: entry " << i << " is not finite";
            throw IngestionError(os.str());
        }
    std::sort(sorted.begin(), sorted.end());
    return Margin(family::Empirical{std::move(sorted)});
}

Margin empiricalFromSample(const std::span<const double> xs)
{
    return Margin::empirical(xs);
}

double Margin::cdf(const double x) const
{
    requireFinite(x, "cdf");
    return std::visit(overloaded{
        [x](const family::Uniform& f) {
            if (x <= f.lower) return 0.0;
            if (x >= f.upper) return 1.0;
            return (x - f.lower) / (f.upper - f.lower);
        },
        [x](const family::Exponential& f) {
            return x <= 0.0 ? 0.0 : -std::expm1(-f.rate * x);
        },
        [x](const family::Lognormal& f) {
            if (x <= 0.0) return 0.0;
            return standardNormalCdf((std::log(x) - f.mu) / f.sigma);
        },
        [x](const family::GumbelStandard&) {
            return std::exp(-std::exp(-x));
        },
        [x](const family::Bernoulli& f) {
            if (x < 0.0) return 0.0;
            if (x < 1.0) return 1.0 - f.p;
            return 1.0;
        },
        [x](const family::Empirical& f) {
            const auto it = std::upper_bound(f.sorted.begin(), f.sorted.end(), x);
            return static_cast<double>(it - f.sorted.begin()) /
                   static_cast<double>(f.sorted.size());
        }}, family_);
}

double Margin::quantile(const double u) const
{
    if (!(u >= 0.0 && u <= 1.0))
    {
        std::ostringstream os;
        os << "quantile: u = " << u << " outside [0, 1]";
        throw DomainError(os.str());
    }
    const double x = std::visit(overloaded{
        [u](const family::Uniform& f) {
            if (u == 1.0) return f.upper;
            return f.lower + u * (f.upper - f.lower);
        },
        [u](const family::Exponential& f) {
            if (u == 1.0) infiniteQuantile("exponential", u);
            return -std::log1p(-u) / f.rate;
        },
        [u](const family::Lognormal& f) {
            if (u == 0.0) return 0.0;
            if (u == 1.0) infiniteQuantile("lognormal", u);
            return std::exp(f.mu + f.sigma * standardNormalQuantile(u));
        },
        [u](const family::GumbelStandard&) {
            if (u == 0.0 || u == 1.0) infiniteQuantile("gumbel-standard", u);
            return -std::log(-std::log(u));
        },
        [u](const family::Bernoulli& f) {
            if (u == 0.0) return f.p == 1.0 ? 1.0 : 0.0;
            return u <= 1.0 - f.p ? 0.0 : 1.0;
        },
        [u](const family::Empirical& f) {
            const std::size_t n = f.sorted.size();
            if (u == 0.0) return f.sorted.front();
            // smallest k with k/n >= u, corrected for rounding in u*n
            auto k = static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
            k = std::clamp<std::size_t>(k, 1, n);
            while (k > 1 && static_cast<double>(k - 1) / static_cast<double>(n) >= u)
                --k;
            while (k < n && static_cast<double>(k) / static_cast<double>(n) < u)
                ++k;
            return f.sorted[k - 1];
        }}, family_);
    if (u == 0.0 || u == 1.0 || !isContinuous())
        return x;
    return snapToInverse(x, u, [this](double t) {return cdf(t);});
}

double Margin::density(const double x) const
{
    requireFinite(x, "density");
    return std::visit(overloaded{
        [x](const family::Uniform& f) {
            return (x < f.lower || x > f.upper) ? 0.0 : 1.0 / (f.upper - f.lower);
        },
        [x](const family::Exponential& f) {
            return x < 0.0 ? 0.0 : f.rate * std::exp(-f.rate * x);
        },
        [x](const family::Lognormal& f) {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - f.mu) / f.sigma;
            return std::exp(-0.5 * z * z) /
                   (x * f.sigma * std::sqrt(2.0 * std::numbers::pi));
        },
        [x](const family::GumbelStandard&) {
            return std::exp(-x - std::exp(-x));
        },
        [](const family::Bernoulli&) -> double {
            throw SingularFamilyError("bernoulli margin has no density");
        },
        [](const family::Empirical&) -> double {
            throw SingularFamilyError("empirical margin has no density");
        }}, family_);
}

double Margin::mean() const
{
    return std::visit(overloaded{
        [](const family::Uniform& f) {return 0.5 * (f.lower + f.upper);},
        [](const family::Exponential& f) {return 1.0 / f.rate;},
        [](const family::Lognormal& f) {return std::exp(f.mu + 0.5 * f.sigma * f.sigma);},
        [](const family::GumbelStandard&) {return std::numbers::egamma;},
        [](const family::Bernoulli& f) {return f.p;},
        [](const family::Empirical& f) {
            return std::accumulate(f.sorted.begin(), f.sorted.end(), 0.0) /
                   static_cast<double>(f.sorted.size());
        }}, family_);
}

double Margin::variance() const
{
    return std::visit(overloaded{
        [](const family::Uniform& f) {
            const double w = f.upper - f.lower;
            return w * w / 12.0;
        },
        [](const family::Exponential& f) {return 1.0 / (f.rate * f.rate);},
        [](const family::Lognormal& f) {
            const double s2 = f.sigma * f.sigma;
            return std::expm1(s2) * std::exp(2.0 * f.mu + s2);
        },
        [](const family::GumbelStandard&) {
            return std::numbers::pi * std::numbers::pi / 6.0;
        },
        [](const family::Bernoulli& f) {return f.p * (1.0 - f.p);},
        [this](const family::Empirical& f) {
            const double m = mean();
            double ss = 0.0;
            for (const double x : f.sorted)
                ss += (x - m) * (x - m);
            return ss / static_cast<double>(f.sorted.size());
        }}, family_);
}

bool Margin::isContinuous() const
{
    return !std::holds_alternative<family::Bernoulli>(family_) &&
           !std::holds_alternative<family::Empirical>(family_);
}

std::vector<double> Margin::atoms() const
{
    if (const auto* b = std::get_if<family::Bernoulli>(&family_))
    {
        std::vector<double> out;
        if (b->p < 1.0) out.push_back(0.0);
        if (b->p > 0.0) out.push_back(1.0);
        return out;
    }
    if (const auto* e = std::get_if<family::Empirical>(&family_))
    {
        std::vector<double> out(e->sorted);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    return {};
}

std::vector<double> Margin::sample(RandomStream& rng, const std::size_t n) const
{
    if (n == 0)
        throw EmptySampleError("sample: n must be at least 1");
    std::vector<double> out(n);
    for (auto& x : out)
        x = draw(rng);
    return out;
}

std::string Margin::describe() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
        [&os](const family::Uniform& f) {os << "uniform(" << f.lower << "," << f.upper << ")";},
        [&os](const family::Exponential& f) {os << "exponential(" << f.rate << ")";},
        [&os](const family::Lognormal& f) {os << "lognormal(" << f.mu << "," << f.sigma << ")";},
        [&os](const family::GumbelStandard&) {os << "gumbel-standard";},
        [&os](const family::Bernoulli& f) {os << "bernoulli(" << f.p << ")";},
        [&os](const family::Empirical& f) {os << "empirical(n=" << f.sorted.size() << ")";}},
        family_);
    return os.str();
}

}
