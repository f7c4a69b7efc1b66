#include "wle/simulation.hpp"

#include "wle/parallel.hpp"

#include <cmath>

namespace wle {

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::scale: return "scale";
    case Scheme::location: return "location";
    default: return "exponential";
    }
}

Scheme parse_scheme(std::string_view s)
{
    if (s == "scale")
        return Scheme::scale;
    if (s == "location")
        return Scheme::location;
    if (s == "exponential")
        return Scheme::exponential;
    throw InvalidSpec("unknown contamination scheme " + std::string(s));
}

void SimulationPlan::validate() const
{
    if (reps < 1 || n < 2)
        throw InvalidSpec("simulation needs reps >= 1 and n >= 2");
    if (estimators.empty())
        throw InvalidSpec("simulation needs at least one estimator");
    for (double e : eps_grid)
        if (!(e >= 0 && e <= 0.5))
            throw InvalidSpec("contamination levels must lie in [0, 0.5]");
    residual.validate();
    for (const auto& est : estimators)
        if (est.weight)
            wle::validate(*est.weight);
}

SimulationPlan default_plan(Scheme scheme)
{
    SimulationPlan plan;
    plan.scheme = scheme;
    plan.estimators = {{"MLE", std::nullopt}, {"WLE alpha=1.01", GammaKernel{1.01}}, {"WLE alpha=1.02", GammaKernel{1.02}}};
    return plan;
}

const SimulationCell& SimulationReport::cell(double epsilon, std::string_view estimator) const
{
    for (const auto& c : cells)
        if (std::abs(c.epsilon - epsilon) < 1e-12 && c.estimator == estimator)
            return c;
    throw NotFound("no simulation cell for " + std::string(estimator));
}

std::vector<double> draw_contaminated_sample(Scheme scheme, double epsilon, int n, RandomStream& rng)
{
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) {
        const bool contaminated = rng.bernoulli(epsilon);
        switch (scheme) {
        case Scheme::scale: v = contaminated ? rng.normal(0.0, 5.0) : rng.normal(); break;
        case Scheme::location: v = contaminated ? rng.normal(5.0, 1.0) : rng.normal(); break;
        case Scheme::exponential: v = rng.exponential(contaminated ? 0.2 : 1.0); break;
        }
    }
    return x;
}

namespace {

template <class Family>
void estimate(const Family& family, const std::vector<double>& x, const SimulationPlan& plan,
    const EstimatorSpec& est, std::uint64_t solver_seed, ReplicationRecord& rec)
{
    if (!est.weight) {
        try {
            rec.estimate = family.mle(x)(0);
            rec.root_count = 1;
        } catch (const DegenerateError&) {
        }
        return;
    }
    SolverConfig cfg = plan.solver;
    cfg.seed = solver_seed;
    cfg.threads = 1;
    const RootSet roots = bootstrap_root_search(family, x, plan.residual, *est.weight, cfg);
    rec.root_count = static_cast<int>(roots.roots.size());
    if (!roots.roots.empty())
        rec.estimate = roots.selected_root().theta(0);
}

} // namespace

void summarize(SimulationReport& report)
{
    report.cells.clear();
    const std::size_t ne = report.estimators.size();
    for (std::size_t e = 0; e < report.eps_grid.size(); ++e) {
        for (std::size_t k = 0; k < ne; ++k) {
            SimulationCell c;
            c.epsilon = report.eps_grid[e];
            c.estimator = report.estimators[k];
            double sum = 0, sum2 = 0, roots = 0;
            int ok = 0;
            for (const auto& r : report.replications) {
                if (r.eps_index != static_cast<int>(e) || r.estimator_index != static_cast<int>(k))
                    continue;
                if (!r.estimate) {
                    ++c.failures;
                    continue;
                }
                const double se = (*r.estimate - report.target) * (*r.estimate - report.target);
                sum += se;
                sum2 += se * se;
                roots += r.root_count;
                c.multiple_root_reps += r.root_count > 1;
                ++ok;
            }
            if (ok > 0) {
                c.mse = sum / ok;
                c.mean_root_count = roots / ok;
                const double var = ok > 1 ? (sum2 - ok * c.mse * c.mse) / (ok - 1) : 0.0;
                c.mc_se = std::sqrt(std::max(var, 0.0) / ok);
            } else {
                c.mse = NAN;
            }
            report.cells.push_back(c);
        }
    }
}

SimulationReport run_simulation(const SimulationPlan& plan)
{
    plan.validate();
    SimulationReport report;
    report.scheme = plan.scheme;
    report.n = plan.n;
    report.reps = plan.reps;
    report.seed = plan.seed;
    report.target = plan.target();
    report.eps_grid = plan.eps_grid;
    for (const auto& e : plan.estimators)
        report.estimators.push_back(e.label);

    const std::size_t ne = plan.estimators.size();
    const std::size_t jobs = plan.eps_grid.size() * static_cast<std::size_t>(plan.reps);
    report.replications.resize(jobs * ne);

    parallel_for(jobs, plan.threads, [&](std::size_t job) {
        const int e = static_cast<int>(job / static_cast<std::size_t>(plan.reps));
        const int r = static_cast<int>(job % static_cast<std::size_t>(plan.reps));
        RandomStream rng(plan.seed, stream_id({0x5a3b1e, static_cast<std::uint64_t>(e), static_cast<std::uint64_t>(r)}));
        const std::vector<double> x = draw_contaminated_sample(plan.scheme, plan.eps_grid[e], plan.n, rng);
        for (std::size_t k = 0; k < ne; ++k) {
            ReplicationRecord& rec = report.replications[job * ne + k];
            rec.eps_index = e;
            rec.estimator_index = static_cast<int>(k);
            rec.replication = r;
            const std::uint64_t solver_seed = splitmix64(plan.seed ^ stream_id({static_cast<std::uint64_t>(e),
                static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(k)}));
            try {
                if (plan.scheme == Scheme::exponential)
                    estimate(ExponentialFamily{}, x, plan, plan.estimators[k], solver_seed, rec);
                else
                    estimate(NormalFamily{}, x, plan, plan.estimators[k], solver_seed, rec);
            } catch (const Error&) {
                rec.estimate.reset();
            }
        }
    });
    summarize(report);
    return report;
}

} // namespace wle
