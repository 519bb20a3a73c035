#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "copkit/copula.hpp"
#include "copkit/coupling.hpp"
#include "copkit/dependence.hpp"
#include "copkit/error.hpp"
#include "copkit/multisensory.hpp"
#include "csv.hpp"

namespace copkit::cli {

using Json = nlohmann::ordered_json;

namespace {
    std::vector<double> parseList(const std::string& text, const std::string& what)
    {
        std::vector<double> out;
        std::string item;
        std::istringstream is(text);
        while (std::getline(is, item, ','))
        {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v))
                throw DomainError(what + ": '" + item + "' is not a number");
            out.push_back(v);
        }
        return out;
    }

    void emit(const Json& report, const std::string& outputPath, std::ostream& out)
    {
        const std::string text = report.dump(2) + "\n";
        if (outputPath.empty())
        {
            out << text;
            return;
        }
        std::ofstream f(outputPath, std::ios::binary);
        if (!f)
            throw IngestionError("cannot write '" + outputPath + "'");
        f << text;
    }

    std::string formatDouble(const double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    struct CopulaOptions
    {
        std::string family = "independence";
        double delta = 1.0;
        double lambda = 0.5;
        std::size_t dimension = 2;

        void attach(CLI::App* app)
        {
            app->add_option("--family", family,
                            "independence | comonotone | countermonotone | gumbel-bev | frechet-mixture")
                ->required();
            app->add_option("--delta", delta, "gumbel-bev parameter (> 0)");
            app->add_option("--lambda", lambda, "frechet-mixture weight of W in [0, 1]");
            app->add_option("--dimension", dimension, "dimension for independence / comonotone");
        }

        Copula build() const
        {
            if (family == "independence") return Copula::independence(dimension);
            if (family == "comonotone") return Copula::comonotone(dimension);
            if (family == "countermonotone") return Copula::countermonotone();
            if (family == "gumbel-bev") return Copula::gumbelBev(delta);
            if (family == "frechet-mixture") return Copula::frechetMixture(lambda);
            throw DomainError("unknown copula family '" + family + "'");
        }

        void describe(Json& config) const
        {
            config["family"] = family;
            if (family == "gumbel-bev") config["delta"] = delta;
            if (family == "frechet-mixture") config["lambda"] = lambda;
            if (family == "independence" || family == "comonotone") config["dimension"] = dimension;
        }
    };

    struct PointOptions
    {
        std::optional<double> u, v;
        std::string point;

        void attach(CLI::App* app)
        {
            app->add_option("--u", u, "first coordinate");
            app->add_option("--v", v, "second coordinate");
            app->add_option("--point", point, "comma-separated coordinates (any dimension)");
        }

        std::vector<double> resolve() const
        {
            if (!point.empty())
                return parseList(point, "--point");
            if (!u || !v)
                throw DomainError("give --u and --v, or --point");
            return {*u, *v};
        }

        void describe(Json& config) const
        {
            if (!point.empty()) config["point"] = point;
            else
            {
                config["u"] = *u;
                config["v"] = *v;
            }
        }
    };

    // ---- race-test -------------------------------------------------------

    struct RaceOptions
    {
        std::string input, output;
        RaceTestConfig test;
        std::uint64_t seed = 0;
    };

    int runRaceTest(const RaceOptions& o, std::ostream& out)
    {
        const RTDataset data = readRtCsv(o.input);
        RandomStream rng = RandomStream(o.seed).derive("race-test");
        const RaceTestReport r = testRaceInequality(data, o.test, rng);

        Json config;
        config["input"] = o.input;
        config["label-v"] = o.test.visualLabel;
        config["label-a"] = o.test.auditoryLabel;
        config["label-va"] = o.test.bimodalLabel;
        config["grid"] = o.test.gridSize;
        config["lower-percentile"] = o.test.lowerPercentile;
        config["upper-percentile"] = o.test.upperPercentile;
        config["resamples"] = o.test.resamples;
        config["seed"] = o.seed;
        if (!o.output.empty()) config["output"] = o.output;

        Json report;
        report["command"] = "race-test";
        report["config"] = config;
        report["seed"] = o.seed;
        report["substreams"] = {{"bootstrap", "race-test/bootstrap/<resample index>"}};
        Json counts;
        counts[o.test.visualLabel] = data.at(o.test.visualLabel).size();
        counts[o.test.auditoryLabel] = data.at(o.test.auditoryLabel).size();
        counts[o.test.bimodalLabel] = data.at(o.test.bimodalLabel).size();
        report["sample_sizes"] = counts;

        Json grid = Json::array();
        for (std::size_t i = 0; i < r.t.size(); ++i)
            grid.push_back({{"t", r.t[i]}, {"f_v", r.fv[i]}, {"f_a", r.fa[i]}, {"f_va", r.fva[i]},
                            {"grice", r.grice[i]}, {"miller", r.miller[i]},
                            {"violation", static_cast<bool>(r.violation[i])}});
        report["grid"] = grid;
        report["violations"] = r.violationTimes;
        report["max_violation"] = r.maxViolation;
        report["max_violation_t"] = r.maxViolationTime;
        report["max_grice_undershoot"] = r.maxGriceUndershoot;
        report["bootstrap"] = {{"resamples", r.resamples},
                               {"violation_proportion", r.bootstrapViolationProportion}};
        emit(report, o.output, out);
        return r.violated() ? kDomainFinding : kSuccess;
    }

    // ---- twin-simulate ---------------------------------------------------

    struct TwinOptions
    {
        double pi = 0.5;
        std::string f1i = "uniform:90,110";
        std::string f1n = "uniform:110,130";
        std::string f2i = "uniform:190,210";
        std::string f2n = "uniform:170,190";
        std::size_t n = 100000;
        std::uint64_t seed = 0;
        std::string samples, output;
    };

    int runTwin(const TwinOptions& o, std::ostream& out)
    {
        const TwinParams params{o.pi, parseMargin(o.f1i), parseMargin(o.f1n),
                                parseMargin(o.f2i), parseMargin(o.f2n)};
        params.validate();
        if (o.n < 2)
            throw DomainError("--n must be at least 2");

        RandomStream rng = RandomStream(o.seed).derive("twin-simulate");
        const auto draws = twinSample(params, rng, o.n);
        const auto [cov, se] = sampleCovariance(draws);
        const double closed = twinCovariance(params);

        if (!o.samples.empty())
        {
            std::ofstream f(o.samples, std::ios::binary);
            if (!f)
                throw IngestionError("cannot write '" + o.samples + "'");
            f << "w1,w2,rt,integrated\n";
            for (const auto& d : draws)
                f << formatDouble(d.w1) << ',' << formatDouble(d.w2) << ','
                  << formatDouble(d.rt) << ',' << (d.integrated ? 1 : 0) << '\n';
        }

        std::size_t integrated = 0;
        for (const auto& d : draws)
            integrated += d.integrated ? 1 : 0;

        Json config;
        config["pi"] = o.pi;
        config["stage1-integrated"] = o.f1i;
        config["stage1-not-integrated"] = o.f1n;
        config["stage2-integrated"] = o.f2i;
        config["stage2-not-integrated"] = o.f2n;
        config["n"] = o.n;
        config["seed"] = o.seed;
        if (!o.samples.empty()) config["samples"] = o.samples;
        if (!o.output.empty()) config["output"] = o.output;

        Json report;
        report["command"] = "twin-simulate";
        report["config"] = config;
        report["seed"] = o.seed;
        report["substreams"] = {{"draws", "twin-simulate"}};
        report["closed_form_covariance"] = closed;
        report["sample_covariance"] = cov;
        report["sample_covariance_std_error"] = se;
        report["z_score"] = se > 0.0 ? (cov - closed) / se : 0.0;
        report["integrated_fraction"] = static_cast<double>(integrated) / static_cast<double>(o.n);
        emit(report, o.output, out);
        return kSuccess;
    }

    // ---- depend ----------------------------------------------------------

    struct DependOptions
    {
        std::string input, output;
    };

    int runDepend(const DependOptions& o, std::ostream& out)
    {
        const auto pairs = readPairCsv(o.input);
        if (pairs.size() < 2)
            throw IngestionError(o.input + ": at least two rows are required");
        const DependenceReport r = dependenceReport(pairs);

        Json config;
        config["input"] = o.input;
        if (!o.output.empty()) config["output"] = o.output;

        Json report;
        report["command"] = "depend";
        report["config"] = config;
        report["n"] = r.n;
        report["pearson"] = {{"estimate", r.pearson}, {"std_error", r.pearsonStdError}};
        report["kendall_tau"] = {{"estimate", r.kendallTau}, {"std_error", r.kendallStdError}};
        report["spearman_rho"] = {{"estimate", r.spearmanRho}, {"std_error", r.spearmanStdError}};
        report["three_tau_minus_two_rho"] = {{"value", r.tauRho.value},
                                             {"within_bounds", !r.tauRho.violated}};
        emit(report, o.output, out);
        return r.tauRho.violated ? kDomainFinding : kSuccess;
    }

    // ---- copula ----------------------------------------------------------

    struct CopulaCommand
    {
        CopulaOptions copula;
        PointOptions point;
        double h = 1e-4;
        std::string output;
    };

    int runCopula(const std::string& action, const CopulaCommand& o, std::ostream& out)
    {
        const Copula c = o.copula.build();
        const auto u = o.point.resolve();

        Json config;
        o.copula.describe(config);
        o.point.describe(config);
        if (action == "density") config["step"] = o.h;
        if (!o.output.empty()) config["output"] = o.output;

        Json report;
        report["command"] = "copula " + action;
        report["config"] = config;
        report["copula"] = c.name();
        if (action == "eval")
        {
            report["value"] = c(u);
            const auto [lower, upper] = frechetBoundGap(c, u);
            report["lower_bound_gap"] = lower;
            report["upper_bound_gap"] = upper;
        }
        else if (action == "transforms")
        {
            if (u.size() != 2)
                throw UnsupportedDimensionError("copula transforms needs a bivariate point");
            const auto t = copulaTransforms(c, u[0], u[1]);
            report["survival"] = t.survival;
            report["dual"] = t.dual;
            report["co_copula"] = t.coCopula;
            report["diagonal"] = t.diagonal;
        }
        else
        {
            if (u.size() != 2)
                throw UnsupportedDimensionError("copula density needs a bivariate point");
            report["density"] = copulaDensityNumeric(c, u[0], u[1], o.h);
        }
        emit(report, o.output, out);
        return kSuccess;
    }

    // ---- coupling --------------------------------------------------------

    struct CouplingCommand
    {
        std::string a, b;
        std::vector<std::string> pmfs;
        std::size_t n = 10000;
        std::uint64_t seed = 0;
        std::string output;
    };

    int runCoupling(const std::string& action, const CouplingCommand& o, std::ostream& out)
    {
        Json config;
        Json report;
        report["command"] = "coupling " + action;
        if (action == "tv")
        {
            const Pmf a = readPmfCsv(o.a), b = readPmfCsv(o.b);
            config["a"] = o.a;
            config["b"] = o.b;
            if (!o.output.empty()) config["output"] = o.output;
            report["config"] = config;
            report["total_variation"] = totalVariation(a, b);
            const std::vector<Pmf> both{a, b};
            report["coupling_event_bound"] = couplingEventBound(both);
            emit(report, o.output, out);
            return kSuccess;
        }

        if (o.pmfs.size() < 2)
            throw DomainError("give at least two --pmf files");
        std::vector<Pmf> pmfs;
        for (const auto& path : o.pmfs)
            pmfs.push_back(readPmfCsv(path));
        config["pmf"] = o.pmfs;
        const double c = couplingEventBound(pmfs);

        if (action == "bound")
        {
            if (!o.output.empty()) config["output"] = o.output;
            report["config"] = config;
            report["coupling_event_bound"] = c;
            emit(report, o.output, out);
            return kSuccess;
        }

        config["n"] = o.n;
        config["seed"] = o.seed;
        if (!o.output.empty()) config["output"] = o.output;
        if (o.n == 0)
            throw DomainError("--n must be positive");
        const CoupledSampler sampler = maximalCoupling(pmfs);
        RandomStream rng = RandomStream(o.seed).derive("coupling-maximal");
        std::size_t hits = 0, equal = 0;
        for (std::size_t i = 0; i < o.n; ++i)
        {
            const auto d = sampler.draw(rng);
            hits += d.coupled ? 1 : 0;
            bool same = true;
            for (const double x : d.values)
                same = same && x == d.values.front();
            equal += same ? 1 : 0;
        }
        const double rate = static_cast<double>(hits) / static_cast<double>(o.n);
        report["config"] = config;
        report["seed"] = o.seed;
        report["substreams"] = {{"draws", "coupling-maximal"}};
        report["coupling_event_bound"] = c;
        report["coupling_event_rate"] = rate;
        report["coupling_event_std_error"] = std::sqrt(c * (1.0 - c) / static_cast<double>(o.n));
        report["all_equal_rate"] = static_cast<double>(equal) / static_cast<double>(o.n);
        emit(report, o.output, out);
        return kSuccess;
    }
}

Margin parseMargin(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::vector<double> args =
        colon == std::string::npos ? std::vector<double>{} : parseList(text.substr(colon + 1), text);
    const auto want = [&](std::size_t k) {
        if (args.size() != k)
        {
            std::ostringstream os;
            os << "margin '" << text << "': expected " << k << " parameter(s)";
            throw DomainError(os.str());
        }
    };
    if (name == "uniform") {want(2); return Margin::uniform(args[0], args[1]);}
    if (name == "exponential") {want(1); return Margin::exponential(args[0]);}
    if (name == "lognormal") {want(2); return Margin::lognormal(args[0], args[1]);}
    if (name == "gumbel-standard") {want(0); return Margin::gumbelStandard();}
    if (name == "bernoulli") {want(1); return Margin::bernoulli(args[0]);}
    throw DomainError("unknown margin family '" + name + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"copkit: couplings, copulas and race-model analysis"};
    app.require_subcommand(1);

    RaceOptions race;
    auto* raceCmd = app.add_subcommand("race-test", "test the race-model inequality on RT data");
    raceCmd->add_option("--input", race.input, "CSV with columns condition,rt")->required();
    raceCmd->add_option("--label-v", race.test.visualLabel, "visual condition label");
    raceCmd->add_option("--label-a", race.test.auditoryLabel, "auditory condition label");
    raceCmd->add_option("--label-va", race.test.bimodalLabel, "bimodal condition label");
    raceCmd->add_option("--grid", race.test.gridSize, "number of t grid points");
    raceCmd->add_option("--lower-percentile", race.test.lowerPercentile, "pooled percentile for the first t");
    raceCmd->add_option("--upper-percentile", race.test.upperPercentile, "pooled percentile for the last t");
    raceCmd->add_option("--resamples", race.test.resamples, "bootstrap resamples (0 disables)");
    raceCmd->add_option("--seed", race.seed, "random seed");
    raceCmd->add_option("--output", race.output, "JSON report path (stdout if omitted)");

    TwinOptions twin;
    auto* twinCmd = app.add_subcommand("twin-simulate", "simulate the two-stage TWIN model");
    twinCmd->add_option("--pi", twin.pi, "integration probability");
    twinCmd->add_option("--stage1-integrated", twin.f1i, "first-stage margin given integration");
    twinCmd->add_option("--stage1-not-integrated", twin.f1n, "first-stage margin without integration");
    twinCmd->add_option("--stage2-integrated", twin.f2i, "second-stage margin given integration");
    twinCmd->add_option("--stage2-not-integrated", twin.f2n, "second-stage margin without integration");
    twinCmd->add_option("--n", twin.n, "number of simulated trials");
    twinCmd->add_option("--seed", twin.seed, "random seed");
    twinCmd->add_option("--samples", twin.samples, "CSV path for the simulated trials");
    twinCmd->add_option("--output", twin.output, "JSON summary path (stdout if omitted)");

    DependOptions depend;
    auto* dependCmd = app.add_subcommand("depend", "Pearson, Kendall and Spearman from paired data");
    dependCmd->add_option("--input", depend.input, "CSV with columns x,y")->required();
    dependCmd->add_option("--output", depend.output, "JSON report path (stdout if omitted)");

    CopulaCommand copula;
    auto* copulaCmd = app.add_subcommand("copula", "evaluate copulas");
    copulaCmd->require_subcommand(1);
    std::string copulaAction;
    for (const char* action : {"eval", "transforms", "density"})
    {
        auto* sub = copulaCmd->add_subcommand(action);
        copula.copula.attach(sub);
        copula.point.attach(sub);
        if (std::string(action) == "density")
            sub->add_option("--step", copula.h, "finite-difference step h");
        sub->add_option("--output", copula.output, "JSON output path (stdout if omitted)");
        sub->callback([&copulaAction, action] {copulaAction = action;});
    }

    CouplingCommand coupling;
    auto* couplingCmd = app.add_subcommand("coupling", "discrete couplings of pmfs");
    couplingCmd->require_subcommand(1);
    std::string couplingAction;
    {
        auto* tv = couplingCmd->add_subcommand("tv", "total variation distance of two pmfs");
        tv->add_option("--a", coupling.a, "pmf CSV (value,prob)")->required();
        tv->add_option("--b", coupling.b, "pmf CSV (value,prob)")->required();
        tv->add_option("--output", coupling.output, "JSON output path");
        tv->callback([&] {couplingAction = "tv";});

        auto* bound = couplingCmd->add_subcommand("bound", "coupling-event bound of several pmfs");
        bound->add_option("--pmf", coupling.pmfs, "pmf CSV (value,prob); repeat")->required();
        bound->add_option("--output", coupling.output, "JSON output path");
        bound->callback([&] {couplingAction = "bound";});

        auto* maximal = couplingCmd->add_subcommand("maximal", "simulate the maximal coupling");
        maximal->add_option("--pmf", coupling.pmfs, "pmf CSV (value,prob); repeat")->required();
        maximal->add_option("--n", coupling.n, "number of draws");
        maximal->add_option("--seed", coupling.seed, "random seed");
        maximal->add_option("--output", coupling.output, "JSON output path");
        maximal->callback([&] {couplingAction = "maximal";});
    }

    std::vector<const char*> argv{"copkit"};
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (raceCmd->parsed()) return runRaceTest(race, out);
        if (twinCmd->parsed()) return runTwin(twin, out);
        if (dependCmd->parsed()) return runDepend(depend, out);
        if (copulaCmd->parsed()) return runCopula(copulaAction, copula, out);
        if (couplingCmd->parsed()) return runCoupling(couplingAction, coupling, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}
