#include "copkit/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "copkit/error.hpp"

namespace copkit {

namespace cf = copula_family;

namespace {
    template <class... Ts> struct overloaded : Ts... {using Ts::operator()...;};
    template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

    void checkUnitInterval(const double x)
    {
        if (!(x >= 0.0 && x <= 1.0))
        {
            std::ostringstream os;
            os << "copula argument " << x << " outside [0, 1]";
            throw DomainError(os.str());
        }
    }

    void requireBivariate(const Copula& c, const char* what)
    {
        if (c.dimension() != 2)
        {
            std::ostringstream os;
            os << what << ": defined for bivariate copulas only (got n = "
               << c.dimension() << ")";
            throw UnsupportedDimensionError(os.str());
        }
    }

    double evalGumbelBev(const double delta, const double u, const double v)
    {
        if (u == 0.0 || v == 0.0)
            return 0.0;
        // (-ln 1)^-delta = +inf sends the exponent to 0: C(u, 1) = u, C(1, v) = v
        if (u == 1.0)
            return v;
        if (v == 1.0)
            return u;
        const double a = -std::log(u);
        const double b = -std::log(v);
        // [a^-d + b^-d]^(-1/d) evaluated through a log-sum-exp
        const double la = -delta * std::log(a);
        const double lb = -delta * std::log(b);
        const double m = std::max(la, lb);
        const double logSum = m + std::log(std::exp(la - m) + std::exp(lb - m));
        const double t = std::exp(-logSum / delta);
        return std::exp(-(a + b) + t);
    }

    // Bilinear interpolation of the node table reproduces C exactly because
    // mass is uniform inside each cell.
    double evalCheckerboard(const cf::Checkerboard& cb, const double u, const double v)
    {
        const std::size_t k = cb.k;
        const double kd = static_cast<double>(k);
        const std::size_t i = std::min(static_cast<std::size_t>(u * kd), k - 1);
        const std::size_t j = std::min(static_cast<std::size_t>(v * kd), k - 1);
        const double fu = u * kd - static_cast<double>(i);
        const double fv = v * kd - static_cast<double>(j);
        const auto node = [&](std::size_t a, std::size_t b) {return cb.cumulative[a * (k + 1) + b];};
        return (1.0 - fu) * (1.0 - fv) * node(i, j) + fu * (1.0 - fv) * node(i + 1, j) +
               (1.0 - fu) * fv * node(i, j + 1) + fu * fv * node(i + 1, j + 1);
    }

    // Conditional inversion: solve dC/du(u, v) = w for v by bisection.
    double conditionalInverse(const Copula& c, const double u, const double w)
    {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-8)
        {
            const double mid = 0.5 * (lo + hi);
            if (partialDerivativeU(c, u, mid) < w)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
}

Copula Copula::independence(const std::size_t dimension)
{
    if (dimension < 2)
        throw UnsupportedDimensionError("independence copula requires n >= 2");
    return Copula(cf::Independence{dimension});
}

Copula Copula::comonotone(const std::size_t dimension)
{
    if (dimension < 2)
        throw UnsupportedDimensionError("comonotone copula requires n >= 2");
    return Copula(cf::Comonotone{dimension});
}

Copula Copula::countermonotone()
{
    return Copula(cf::Countermonotone{});
}

Copula Copula::gumbelBev(const double delta)
{
    if (!std::isfinite(delta) || !(delta > 0.0))
        throw DomainError("gumbel-bev copula requires delta > 0");
    return Copula(cf::GumbelBev{delta});
}

Copula Copula::frechetMixture(const double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("frechet-mixture copula requires lambda in [0, 1]");
    return Copula(cf::FrechetMixture{lambda});
}

Copula Copula::checkerboard(const std::size_t k, std::vector<double> masses)
{
    if (k == 0)
        throw DomainError("checkerboard copula requires k >= 1");
    if (masses.size() != k * k)
        throw ShapeError("checkerboard copula: expected k*k cell masses");

    const double target = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < k; ++j)
        {
            if (!(masses[i * k + j] >= 0.0))
                throw DomainError("checkerboard copula: negative cell mass");
            row += masses[i * k + j];
            col += masses[j * k + i];
        }
        if (std::abs(row - target) > 1e-9 || std::abs(col - target) > 1e-9)
            throw DomainError("checkerboard copula: row and column masses must equal 1/k");
    }

    std::vector<double> cumulative((k + 1) * (k + 1), 0.0);
    for (std::size_t i = 1; i <= k; ++i)
        for (std::size_t j = 1; j <= k; ++j)
            cumulative[i * (k + 1) + j] = masses[(i - 1) * k + (j - 1)] +
                                          cumulative[(i - 1) * (k + 1) + j] +
                                          cumulative[i * (k + 1) + (j - 1)] -
                                          cumulative[(i - 1) * (k + 1) + (j - 1)];
    // pin the margins to the exact uniform values
    for (std::size_t i = 0; i <= k; ++i)
    {
        cumulative[i * (k + 1) + k] = static_cast<double>(i) * target;
        cumulative[k * (k + 1) + i] = static_cast<double>(i) * target;
    }

    std::vector<double> cellCdf(masses.size());
    std::partial_sum(masses.begin(), masses.end(), cellCdf.begin());
    return Copula(cf::Checkerboard{k, std::move(masses), std::move(cumulative), std::move(cellCdf)});
}

Copula Copula::checkerboardFromPairs(const std::span<const std::pair<double, double>> pairs)
{
    const std::size_t n = pairs.size();
    if (n == 0)
        throw IngestionError("checkerboard copula: no observations");

    const auto ranks = [&](auto key) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {return key(pairs[a]) < key(pairs[b]);});
        std::vector<std::size_t> r(n);
        for (std::size_t pos = 0; pos < n; ++pos)
            r[order[pos]] = pos;
        return r;
    };
    const auto ru = ranks([](const auto& p) {return p.first;});
    const auto rv = ranks([](const auto& p) {return p.second;});

    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);

    // overlap of [r/n, (r+1)/n] with each grid interval it touches
    const auto spread = [&](std::size_t r) {
        const double a = static_cast<double>(r) / nd;
        const double b = static_cast<double>(r + 1) / nd;
        std::vector<std::pair<std::size_t, double>> parts;
        const std::size_t first = std::min(static_cast<std::size_t>(a * kd), k - 1);
        for (std::size_t cell = first; cell < k; ++cell)
        {
            const double lo = std::max(a, static_cast<double>(cell) / kd);
            const double hi = std::min(b, static_cast<double>(cell + 1) / kd);
            if (hi <= lo)
            {
                if (static_cast<double>(cell) / kd >= b) break;
                continue;
            }
            parts.emplace_back(cell, hi - lo);
        }
        return parts;
    };

    std::vector<double> masses(k * k, 0.0);
    for (std::size_t p = 0; p < n; ++p)
        for (const auto& [i, wu] : spread(ru[p]))
            for (const auto& [j, wv] : spread(rv[p]))
                masses[i * k + j] += nd * wu * wv;
    return checkerboard(k, std::move(masses));
}

Copula Copula::survival() const
{
    requireBivariate(*this, "survival copula");
    return Copula(cf::Survival{std::make_shared<const Copula>(*this)});
}

std::size_t Copula::dimension() const
{
    return std::visit(overloaded{
        [](const cf::Independence& f) {return f.dimension;},
        [](const cf::Comonotone& f) {return f.dimension;},
        [](const auto&) {return std::size_t{2};}}, family_);
}

std::string Copula::name() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
        [&](const cf::Independence& f) {os << "independence(n=" << f.dimension << ")";},
        [&](const cf::Comonotone& f) {os << "comonotone(n=" << f.dimension << ")";},
        [&](const cf::Countermonotone&) {os << "countermonotone";},
        [&](const cf::GumbelBev& f) {os << "gumbel-bev(delta=" << f.delta << ")";},
        [&](const cf::FrechetMixture& f) {os << "frechet-mixture(lambda=" << f.lambda << ")";},
        [&](const cf::Checkerboard& f) {os << "empirical-checkerboard(k=" << f.k << ")";},
        [&](const cf::Survival& f) {os << "survival(" << f.base->name() << ")";}}, family_);
    return os.str();
}

double Copula::operator()(const std::span<const double> u) const
{
    if (u.size() != dimension())
    {
        std::ostringstream os;
        os << "copula of dimension " << dimension() << " evaluated at a point of length " << u.size();
        throw ShapeError(os.str());
    }
    for (const double x : u)
        checkUnitInterval(x);

    if (std::holds_alternative<cf::Independence>(family_))
        return std::accumulate(u.begin(), u.end(), 1.0, std::multiplies<>());
    if (std::holds_alternative<cf::Comonotone>(family_))
        return *std::min_element(u.begin(), u.end());
    return eval2(u[0], u[1]);
}

double Copula::operator()(const double u, const double v) const
{
    const std::array<double, 2> p{u, v};
    return (*this)(std::span<const double>(p));
}

double Copula::eval2(const double u, const double v) const
{
    return std::visit(overloaded{
        [&](const cf::Independence&) {return u * v;},
        [&](const cf::Comonotone&) {return std::min(u, v);},
        [&](const cf::Countermonotone&) {return std::max(u + v - 1.0, 0.0);},
        [&](const cf::GumbelBev& f) {return evalGumbelBev(f.delta, u, v);},
        [&](const cf::FrechetMixture& f) {
            return f.lambda * std::max(u + v - 1.0, 0.0) + (1.0 - f.lambda) * std::min(u, v);
        },
        [&](const cf::Checkerboard& f) {return evalCheckerboard(f, u, v);},
        [&](const cf::Survival& f) {
            return (*f.base)(1.0 - u, 1.0 - v) + u + v - 1.0;
        }}, family_);
}

bool Copula::isAbsolutelyContinuous() const
{
    return std::visit(overloaded{
        [](const cf::Independence&) {return true;},
        [](const cf::GumbelBev&) {return true;},
        [](const cf::Checkerboard&) {return true;},
        [](const cf::Survival& f) {return f.base->isAbsolutelyContinuous();},
        [](const auto&) {return false;}}, family_);
}

std::vector<double> Copula::sample(RandomStream& rng) const
{
    if (const auto* f = std::get_if<cf::Independence>(&family_))
    {
        std::vector<double> out(f->dimension);
        for (auto& x : out)
            x = rng.uniform();
        return out;
    }
    if (const auto* f = std::get_if<cf::Comonotone>(&family_))
        return std::vector<double>(f->dimension, rng.uniform());
    const auto p = sample2(rng);
    return {p[0], p[1]};
}

std::array<double, 2> Copula::sample2(RandomStream& rng) const
{
    return std::visit(overloaded{
        [&](const cf::Independence& f) -> std::array<double, 2> {
            if (f.dimension != 2)
                throw UnsupportedDimensionError("sample2 on a copula with n != 2");
            const double u = rng.uniform();
            return {u, rng.uniform()};
        },
        [&](const cf::Comonotone& f) -> std::array<double, 2> {
            if (f.dimension != 2)
                throw UnsupportedDimensionError("sample2 on a copula with n != 2");
            const double u = rng.uniform();
            return {u, u};
        },
        [&](const cf::Countermonotone&) -> std::array<double, 2> {
            const double u = rng.uniform();
            return {u, 1.0 - u};
        },
        [&](const cf::FrechetMixture& f) -> std::array<double, 2> {
            const bool lower = rng.uniform() < f.lambda;
            const double u = rng.uniform();
            return {u, lower ? 1.0 - u : u};
        },
        [&](const cf::GumbelBev&) -> std::array<double, 2> {
            const double u = rng.uniform();
            const double w = rng.uniform();
            return {u, conditionalInverse(*this, u, w)};
        },
        [&](const cf::Checkerboard& f) -> std::array<double, 2> {
            const double r = rng.uniform() * f.cellCdf.back();
            auto it = std::upper_bound(f.cellCdf.begin(), f.cellCdf.end(), r);
            if (it == f.cellCdf.end()) --it;
            const auto cell = static_cast<std::size_t>(it - f.cellCdf.begin());
            const double kd = static_cast<double>(f.k);
            const double u = (static_cast<double>(cell / f.k) + rng.uniform()) / kd;
            const double v = (static_cast<double>(cell % f.k) + rng.uniform()) / kd;
            return {u, v};
        },
        [&](const cf::Survival& f) -> std::array<double, 2> {
            const auto p = f.base->sample2(rng);
            return {1.0 - p[0], 1.0 - p[1]};
        }}, family_);
}

double lowerFrechetBound(const std::span<const double> u)
{
    double s = 0.0;
    for (const double x : u)
    {
        checkUnitInterval(x);
        s += x;
    }
    return std::max(s - static_cast<double>(u.size()) + 1.0, 0.0);
}

double upperFrechetBound(const std::span<const double> u)
{
    if (u.empty())
        throw ShapeError("upperFrechetBound: empty point");
    for (const double x : u)
        checkUnitInterval(x);
    return *std::min_element(u.begin(), u.end());
}

std::pair<double, double> frechetBoundGap(const Copula& c, const std::span<const double> u)
{
    const double value = c(u);
    return {value - lowerFrechetBound(u), upperFrechetBound(u) - value};
}

CopulaTransforms copulaTransforms(const Copula& c, const double u, const double v)
{
    requireBivariate(c, "copulaTransforms");
    const double reflected = c(1.0 - u, 1.0 - v);
    return CopulaTransforms{reflected + u + v - 1.0, u + v - c(u, v), 1.0 - reflected, c(u, u)};
}

double diagonalSection(const Copula& c, const double u)
{
    const std::vector<double> p(c.dimension(), u);
    return c(p);
}

double copulaDensityNumeric(const Copula& c, const double u, const double v, const double h)
{
    requireBivariate(c, "copulaDensityNumeric");
    if (!c.isAbsolutelyContinuous())
        throw SingularFamilyError(c.name() + " is a singular family: density undefined");
    if (!(h > 0.0) || u < 2.0 * h || u > 1.0 - 2.0 * h || v < 2.0 * h || v > 1.0 - 2.0 * h)
        throw DomainError("copulaDensityNumeric: point closer than 2h to the boundary");
    return (c(u + h, v + h) - c(u + h, v - h) - c(u - h, v + h) + c(u - h, v - h)) / (4.0 * h * h);
}

double partialDerivativeU(const Copula& c, const double u, const double v)
{
    const double h = std::min({1e-5, 0.5 * u, 0.5 * (1.0 - u)});
    if (!(h > 0.0))
        throw DomainError("partialDerivativeU: u must be interior");
    return (c(u + h, v) - c(u - h, v)) / (2.0 * h);
}

MPartial mPartialDiscontinuity(const std::span<const double> u, const std::size_t k)
{
    if (k >= u.size() || u.size() < 2)
        throw ShapeError("mPartialDiscontinuity: index out of range");
    double others = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (i != k)
            others = std::min(others, u[i]);
    if (u[k] < others)
        return MPartial::one;
    if (u[k] > others)
        return MPartial::zero;
    return MPartial::undefinedAtTie;
}

SklarJoint::SklarJoint(Copula copula, std::vector<Margin> margins)
    : copula_(std::move(copula)), margins_(std::move(margins))
{
    if (margins_.size() != copula_.dimension())
        throw ShapeError("SklarJoint: number of margins must equal the copula dimension");
}

double SklarJoint::cdf(const std::span<const double> x) const
{
    if (x.size() != margins_.size())
        throw ShapeError("SklarJoint::cdf: point has the wrong length");
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        u[i] = margins_[i].cdf(x[i]);
    return copula_(u);
}

double SklarJoint::marginalCdf(const std::size_t k, const double x) const
{
    if (k >= margins_.size())
        throw ShapeError("SklarJoint::marginalCdf: index out of range");
    std::vector<double> point(margins_.size());
    for (std::size_t i = 0; i < margins_.size(); ++i)
        point[i] = i == k ? x : margins_[i].quantile(kUpperSurrogateLevel);
    return cdf(point);
}

double sklarExtract(const JointCdf& joint, const std::span<const Margin> margins,
                    const std::span<const double> u)
{
    if (u.size() != margins.size())
        throw ShapeError("sklarExtract: point and margins differ in length");
    bool allOne = true;
    for (const double x : u)
    {
        checkUnitInterval(x);
        if (x == 0.0)
            return 0.0;
        allOne = allOne && x == 1.0;
    }
    if (allOne)
        return 1.0;
    std::vector<double> point(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        point[i] = margins[i].quantile(u[i] == 1.0 ? kUpperSurrogateLevel : u[i]);
    return joint(point);
}

}
