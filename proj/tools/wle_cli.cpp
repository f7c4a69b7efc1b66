#include "wle/datasets.hpp"
#include "wle/diagnostics.hpp"
#include "wle/report.hpp"
#include "wle/solver.hpp"
#include "wle/tables.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace wle;

namespace {

struct FitArgs {
    std::string model = "normal";
    std::string data;
    std::string x, y;
    bool log = false;
    std::string weight_fn = "gamma";
    double alpha = 1.01, k = 1.01, xi = 10, d1 = 2.1, d2 = 1;
    double p = 0.5, beta = 1.0;
    std::string ties = "count";
    std::string divisor = "n";
    double tol = 1e-8;
    int max_iter = 500;
    std::vector<double> start;
    int bootstrap_b = 50, bootstrap_m = 3;
    std::uint64_t seed = 20240607;
    std::string format = "json";
};

void add_fit_options(CLI::App* cmd, FitArgs& a)
{
    cmd->add_option("--model", a.model, "poisson | normal | exponential | bivariate | regression")
        ->check(CLI::IsMember({"poisson", "normal", "exponential", "bivariate", "regression"}));
    cmd->add_option("--data", a.data, "bundled dataset name or CSV path")->required();
    cmd->add_option("--x", a.x, "column (default: first)");
    cmd->add_option("--y", a.y, "second column for bivariate / regression response (default: second)");
    cmd->add_flag("--log", a.log, "natural log of the used columns");
    cmd->add_option("--weight-fn", a.weight_fn, "gamma | weibull | gev | f")
        ->check(CLI::IsMember({"gamma", "weibull", "gev", "f"}));
    cmd->add_option("--alpha", a.alpha);
    cmd->add_option("--k", a.k);
    cmd->add_option("--xi", a.xi);
    cmd->add_option("--d1", a.d1);
    cmd->add_option("--d2", a.d2);
    cmd->add_option("--p", a.p, "tail fraction");
    cmd->add_option("--beta-exp", a.beta, "exponent on the model tail in the residual denominator");
    cmd->add_option("--ties", a.ties, "count | sorted_rank")->check(CLI::IsMember({"count", "sorted_rank"}));
    cmd->add_option("--cov-divisor", a.divisor, "bivariate covariance divisor: n | n-1")
        ->check(CLI::IsMember({"n", "n-1"}));
    cmd->add_option("--tol", a.tol);
    cmd->add_option("--max-iter", a.max_iter);
    cmd->add_option("--start", a.start, "starting parameter vector (default: MLE)")->delimiter(',');
    cmd->add_option("--format", a.format)->check(CLI::IsMember({"json", "csv"}));
}

Dataset open_data(const std::string& s)
{
    if (std::filesystem::exists(s))
        return load_dataset_file(s);
    return load_dataset(s);
}

WeightSpec make_spec(const FitArgs& a)
{
    WeightSpec spec;
    if (a.weight_fn == "gamma")
        spec = GammaKernel{a.alpha};
    else if (a.weight_fn == "weibull")
        spec = WeibullKernel{a.k};
    else if (a.weight_fn == "gev")
        spec = GevKernel{a.xi};
    else
        spec = ScaledFKernel{a.d1, a.d2};
    validate(spec);
    return spec;
}

std::vector<double> column(const Dataset& d, const std::string& name, bool log)
{
    auto v = d.numeric(name);
    if (log)
        for (double& x : v) {
            if (!(x > 0))
                throw DomainError("log of a non-positive value in column " + name);
            x = std::log(x);
        }
    return v;
}

template <class Family, class Sample>
int run_fit(const Family& family, const Sample& sample, const FitArgs& a, bool roots)
{
    ResidualConfig rc;
    rc.p = a.p;
    rc.beta = a.beta;
    rc.ties = a.ties == "count" ? TieRule::count : TieRule::sorted_rank;
    SolverConfig sc;
    sc.tolerance = a.tol;
    sc.max_iterations = a.max_iter;
    sc.bootstrap_b = a.bootstrap_b;
    sc.bootstrap_m = a.bootstrap_m;
    sc.seed = a.seed;
    const WeightSpec spec = make_spec(a);
    const auto names = family.parameter_names();
    RootSet set;
    if (roots) {
        set = bootstrap_root_search(family, sample, rc, spec, sc);
    } else {
        ParamVector start = family.mle(sample);
        if (!a.start.empty())
            start = Eigen::Map<const ParamVector>(a.start.data(), static_cast<Eigen::Index>(a.start.size()));
        const Root r = solve_from(family, sample, rc, spec, sc, start);
        set.roots.push_back(r);
        set.sample_size = sample.size();
        set.restarts = 1;
        if (!r.converged)
            std::cerr << "warning: no convergence after " << r.iterations << " iterations\n";
    }
    std::cout << export_report(set, std::vector<std::string>(names.begin(), names.end()), parse_format(a.format));
    return set.roots.empty() || (!roots && !set.roots[0].converged) ? 2 : 0;
}

int fit(const FitArgs& a, bool roots)
{
    const Dataset d = open_data(a.data);
    const std::string x = a.x.empty() ? d.columns.at(0) : a.x;
    auto second = [&] { return a.y.empty() ? d.columns.at(1) : a.y; };
    if (a.model == "poisson")
        return run_fit(PoissonFamily{}, column(d, x, a.log), a, roots);
    if (a.model == "normal")
        return run_fit(NormalFamily{}, column(d, x, a.log), a, roots);
    if (a.model == "exponential")
        return run_fit(ExponentialFamily{}, column(d, x, a.log), a, roots);
    const auto xs = column(d, x, a.log), ys = column(d, second(), a.log);
    if (a.model == "bivariate") {
        std::vector<Vector2> pts;
        for (std::size_t i = 0; i < xs.size(); ++i)
            pts.emplace_back(xs[i], ys[i]);
        return run_fit(BivariateNormalFamily(a.divisor == "n" ? CovarianceDivisor::weight_sum
                                                              : CovarianceDivisor::weight_sum_minus_one),
            pts, a, roots);
    }
    std::vector<RegressionPoint> pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
        pts.push_back({xs[i], ys[i]});
    return run_fit(LinearRegressionFamily{}, pts, a, roots);
}

std::ostream& output(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw NotFound("cannot write " + path);
    return file;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted likelihood estimation with distribution-function residuals"};
    app.require_subcommand(1);

    FitArgs fa, ra;
    add_fit_options(app.add_subcommand("fit", "fit from the MLE or a given start"), fa);
    auto* roots_cmd = app.add_subcommand("roots", "bootstrap root search");
    add_fit_options(roots_cmd, ra);
    roots_cmd->add_option("--bootstrap-b", ra.bootstrap_b);
    roots_cmd->add_option("--bootstrap-m", ra.bootstrap_m);
    roots_cmd->add_option("--seed", ra.seed);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo contamination study");
    std::string scheme = "scale", sim_format = "json", sim_out;
    std::vector<double> eps_grid;
    int sim_n = 30, sim_reps = 1000;
    std::uint64_t sim_seed = 20240607;
    unsigned sim_threads = 0;
    sim->add_option("--scheme", scheme)->check(CLI::IsMember({"scale", "location", "exponential"}));
    sim->add_option("--eps-grid", eps_grid)->delimiter(',');
    sim->add_option("--n", sim_n);
    sim->add_option("--reps", sim_reps);
    sim->add_option("--seed", sim_seed);
    sim->add_option("--threads", sim_threads, "0: all cores");
    sim->add_option("--format", sim_format)->check(CLI::IsMember({"json", "csv"}));
    sim->add_option("--out", sim_out);

    auto* diag = app.add_subcommand("diagnose", "plot-ready CSV curves");
    bool bias = false, scan = false, ellipse = false;
    double alpha = 1.05, eps = 0.2, contaminant = 5.0, y = 10.0, mu = 1.0, coverage = 0.95, eps_max = 0.1;
    std::string ell_data = "hertzsprung_russell", ell_x, ell_y, diag_out;
    auto* g = diag->add_option_group("curve");
    g->add_flag("--bias-curve", bias, "first and second order bias of a N(mu,1) location fit under a point mass at --y");
    g->add_flag("--mixture-scan", scan, "weighted score over mu for (1-eps) N(0,1) + eps N(c,1)");
    g->add_flag("--ellipse", ellipse, "concentration ellipse of the bivariate WLE fit to --data");
    g->require_option(1);
    diag->add_option("--alpha", alpha, "gamma kernel tuning");
    diag->add_option("--eps", eps);
    diag->add_option("--eps-max", eps_max);
    diag->add_option("--contaminant", contaminant);
    diag->add_option("--y", y, "point-mass location");
    diag->add_option("--mu", mu, "model mean for --bias-curve");
    diag->add_option("--coverage", coverage);
    diag->add_option("--data", ell_data);
    diag->add_option("--x", ell_x);
    diag->add_option("--yc", ell_y, "second column for --ellipse");
    diag->add_option("--out", diag_out);

    auto* rep = app.add_subcommand("reproduce", "rerun a documented table and compare");
    std::string table_id, rep_format = "csv";
    ReproduceOptions ro;
    rep->add_option("table_id", table_id)->required();
    rep->add_option("--reps", ro.reps);
    rep->add_option("--seed", ro.seed);
    rep->add_option("--threads", ro.threads);
    rep->add_option("--format", rep_format)->check(CLI::IsMember({"json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("fit"))
            return fit(fa, false);
        if (app.got_subcommand("roots"))
            return fit(ra, true);
        if (app.got_subcommand(sim)) {
            SimulationPlan plan = default_plan(parse_scheme(scheme));
            if (!eps_grid.empty())
                plan.eps_grid = eps_grid;
            plan.n = sim_n;
            plan.reps = sim_reps;
            plan.seed = sim_seed;
            plan.threads = sim_threads;
            const auto report = run_simulation(plan);
            std::ofstream f;
            output(sim_out, f) << export_report(report, parse_format(sim_format));
            return 0;
        }
        if (app.got_subcommand(diag)) {
            std::ofstream f;
            std::ostream& os = output(diag_out, f);
            if (bias) {
                const NormalLocationFamily family(1.0);
                const auto r = influence_second_order(family, ParamVector::Constant(1, mu), GammaKernel{alpha}, y);
                std::vector<double> grid;
                for (int i = 0; i <= 100; ++i)
                    grid.push_back(eps_max * i / 100.0);
                write_bias_curve_csv(os, bias_curve(r, grid));
            } else if (scan) {
                ContaminationSpec cs;
                cs.base = normal_population(0, 1);
                cs.contaminant = normal_population(contaminant, 1);
                cs.epsilon = eps;
                std::vector<double> grid;
                for (int i = 0; i <= 450; ++i)
                    grid.push_back(-2.0 + 0.02 * i);
                write_scan_csv(os, mixture_root_scan(cs, GammaKernel{alpha}, ResidualConfig{}, grid));
            } else {
                const Dataset d = open_data(ell_data);
                const auto pts = pairs(d, ell_x.empty() ? d.columns.at(0) : ell_x, ell_y.empty() ? d.columns.at(1) : ell_y);
                const BivariateNormalFamily family(CovarianceDivisor::weight_sum_minus_one);
                const Root r = solve_from(family, pts, ResidualConfig{}, GammaKernel{alpha}, SolverConfig{}, family.mle(pts));
                write_ellipse_csv(os, ellipse_polyline(concentration_ellipse(r.theta, coverage)));
            }
            return 0;
        }
        if (app.got_subcommand(rep)) {
            const auto t = reproduce_table(table_id, ro);
            std::cout << export_report(t, parse_format(rep_format));
            for (const auto& n : t.notes)
                std::cerr << "note: " << n << '\n';
            std::cerr << (t.passed() ? "PASS" : "FAIL") << ' ' << t.table_id << " (" << t.seconds << " s)\n";
            return t.passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
