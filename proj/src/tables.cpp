#include "wle/tables.hpp"

#include "wle/datasets.hpp"
#include "wle/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace wle {

void TableRow::judge()
{
    const double tol = relative ? tolerance * std::abs(expected) : tolerance;
    pass = std::isfinite(computed) && abs_dev() <= tol;
}

bool TableReport::passed() const
{
    return available && !rows.empty()
        && std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.pass; });
}

namespace {

void add(TableReport& t, std::string label, std::string quantity, double computed, double expected,
    double tolerance, bool relative = false)
{
    TableRow row{std::move(label), std::move(quantity), computed, expected, tolerance, relative, false};
    row.judge();
    t.rows.push_back(std::move(row));
}

void add_vector(TableReport& t, const std::string& label, const std::vector<std::string>& names,
    const ParamVector& computed, const std::vector<double>& expected, const std::vector<double>& tol)
{
    for (std::size_t j = 0; j < expected.size(); ++j)
        add(t, label, names[j], computed(static_cast<Eigen::Index>(j)), expected[j], tol[j]);
}

std::string fmt(const ParamVector& v)
{
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << v(i);
    os << ')';
    return os.str();
}

// computed root closest (sup-norm) to a reference parameter vector
const Root* nearest(const RootSet& set, const ParamVector& ref)
{
    const Root* best = nullptr;
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& r : set.roots) {
        const double d = sup_norm(r.theta - ref);
        if (d < bd) {
            bd = d;
            best = &r;
        }
    }
    return best;
}

ParamVector vec(std::initializer_list<double> v)
{
    ParamVector p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        p(i++) = x;
    return p;
}

// bivariate parameters with the covariance in place of rho, as the beetle table lists them
ParamVector with_covariance(const ParamVector& t)
{
    ParamVector c = t;
    c(4) = t(4) * std::sqrt(t(2) * t(3));
    return c;
}

ParamVector from_covariance(const ParamVector& c)
{
    ParamVector t = c;
    t(4) = c(4) / std::sqrt(c(2) * c(3));
    return t;
}

TableReport table2()
{
    TableReport t{"table2", "Drosophila counts, Poisson model"};
    const auto x = load_dataset("drosophila").numeric("count");
    PoissonFamily poisson;
    add(t, "MLE", "theta", poisson.mle(x)(0), 3.0588, 5e-5);
    std::vector<double> clean;
    for (double v : x)
        if (v < 91)
            clean.push_back(v);
    const ParamVector start = poisson.mle(clean);
    add(t, "MLE-D", "theta", start(0), 0.3939, 5e-5);
    ResidualConfig rc;
    rc.ties = TieRule::sorted_rank;
    const SolverConfig sc;
    const Root g = solve_from(poisson, x, rc, GammaKernel{1.01}, sc, start);
    const Root w = solve_from(poisson, x, rc, WeibullKernel{1.01}, sc, start);
    add(t, "WLE gamma alpha=1.01", "theta", g.theta(0), 0.3948, 1e-3);
    add(t, "WLE weibull k=1.01", "theta", w.theta(0), 0.3948, 1e-3);
    t.notes.push_back("p = 0.5, sorted-rank tie rule, start at the MLE without the count of 91");
    return t;
}

TableReport table3()
{
    TableReport t{"table3", "Newcomb speed of light, normal model"};
    const auto x = load_dataset("newcomb").numeric("time");
    NormalFamily normal;
    const ParamVector mle = normal.mle(x);
    const std::vector<std::string> names{"mu", "sigma2"};
    add_vector(t, "MLE", names, mle, {26.2121, 113.7126}, {5e-5, 5e-5});
    std::vector<double> clean;
    for (double v : x)
        if (v > 0)
            clean.push_back(v);
    add_vector(t, "MLE-D", names, normal.mle(clean), {27.75, 25.4375}, {5e-5, 5e-5});
    ResidualConfig rc;
    rc.ties = TieRule::sorted_rank;
    const SolverConfig sc;
    const std::vector<std::pair<WeightSpec, std::vector<double>>> cols{
        {GammaKernel{1.01}, {27.7581, 25.3204}},
        {GammaKernel{1.1}, {27.8460, 23.9902}},
        {WeibullKernel{1.05}, {27.7982, 24.7364}},
        {WeibullKernel{1.1}, {27.8722, 23.6171}},
        {GevKernel{5}, {27.8303, 23.7256}},
        {GevKernel{10}, {27.7891, 24.6965}},
    };
    for (const auto& [spec, ref] : cols) {
        const Root r = solve_from(normal, x, rc, spec, sc, mle);
        add_vector(t, "WLE " + describe(spec), names, r.theta, ref, {0.05, 0.5});
    }
    t.notes.push_back("p = 0.5, sorted-rank tie rule, start at the MLE");
    return t;
}

TableReport table4()
{
    TableReport t{"table4", "Melbourne rainfall, exponential model"};
    try {
        const auto x = load_dataset("rainfall").numeric("rain");
        (void)x;
    } catch (const NotFound& e) {
        t.available = false;
        t.notes.push_back(e.what());
        add(t, "WLE gamma alpha=1.05", "lambda", std::numeric_limits<double>::quiet_NaN(), 0.2786, 0.005);
    }
    return t;
}

std::vector<double> lubischew_angles() { return load_dataset("lubischew").numeric("angle"); }

const std::vector<ParamVector>& lubischew_reference()
{
    static const std::vector<ParamVector> refs{vec({12.0483, 4.8327}), vec({14.0644, 0.8239}), vec({10.0480, 0.8479})};
    return refs;
}

RootSet lubischew_roots(const ReproduceOptions& opt)
{
    SolverConfig sc;
    sc.seed = opt.seed;
    return bootstrap_root_search(NormalFamily{}, lubischew_angles(), ResidualConfig{}, GammaKernel{1.02}, sc);
}

TableReport table5(const ReproduceOptions& opt)
{
    TableReport t{"table5", "Lubischew front angle, normal model, gamma alpha=1.02"};
    const RootSet set = lubischew_roots(opt);
    const std::vector<std::string> labels{"MLE-like root", "concinna root", "heptapotamica root"};
    add(t, "bootstrap search", "distinct roots >= 3", set.roots.size() >= 3 ? 1.0 : 0.0, 1.0, 0.0);
    std::vector<const Root*> used;
    for (std::size_t k = 0; k < 3; ++k) {
        const Root* r = nearest(set, lubischew_reference()[k]);
        const ParamVector th = r ? r->theta : ParamVector::Constant(2, NAN);
        add_vector(t, labels[k], {"mu", "sigma2"}, th, {lubischew_reference()[k](0), lubischew_reference()[k](1)},
            {0.02, 0.02});
        used.push_back(r);
    }
    const bool distinct = used[0] && used[1] && used[2] && used[0] != used[1] && used[1] != used[2] && used[0] != used[2];
    add(t, "matched roots", "pairwise distinct", distinct ? 1.0 : 0.0, 1.0, 0.0);
    for (const auto& r : set.roots)
        t.notes.push_back("root " + fmt(r.theta) + " weight sum " + std::to_string(r.weight_sum));
    return t;
}

// per-observation weights at the MLE-like, concinna and heptapotamica roots
const std::array<std::vector<double>, 3>& lubischew_reference_weights()
{
    static const std::array<std::vector<double>, 3> w{
        std::vector<double>{0.9965, 0.9999, 0.9999, 0.9983, 0.9999, 0.9965, 0.9999, 0.9999, 0.9999, 0.9965, 0.9999,
            0.9965, 0.9999, 0.9965, 0.9999, 0.9999, 0.9965, 0.9999, 0.9999, 0.9999, 0.9999, 0.9989, 0.9978, 0.9978,
            0.9953, 0.9978, 0.9953, 0.9999, 0.9978, 0.9953, 0.9967, 0.9978, 0.9967, 0.9967, 0.9978, 0.9953, 0.9953,
            0.9953, 0.9967, 0.9978, 0.9953, 0.9967, 0.9953},
        std::vector<double>{0.9899, 0.9494, 0.9959, 0.9992, 0.9494, 0.9899, 0.9959, 0.9959, 0.9959, 0.9899, 0.9494,
            0.9899, 0.9494, 0.9899, 0.9959, 0.9959, 0.9899, 0.9959, 0.9494, 0.9494, 0.9959, 0, 0, 0, 0, 0, 0, 0.4842,
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0.9945, 0.9735, 0.9735, 0.9987,
            0.9735, 0.9987, 0.5714, 0.9735, 0.9987, 0.9999, 0.9735, 0.9999, 0.9999, 0.9735, 0.9987, 0.9987, 0.9987,
            0.9999, 0.9735, 0.9987, 0.9999, 0.9987},
    };
    return w;
}

TableReport table6(const ReproduceOptions& opt)
{
    TableReport t{"table6", "Lubischew front angle, weights at the three roots"};
    const RootSet set = lubischew_roots(opt);
    const auto species = load_dataset("lubischew").text("species");
    const std::array<std::string, 3> cols{"MLE-like", "concinna", "heptapotamica"};
    const Root* concinna = nullptr;
    for (std::size_t k = 0; k < 3; ++k) {
        const Root* r = nearest(set, lubischew_reference()[k]);
        if (k == 1)
            concinna = r;
        const auto& ref = lubischew_reference_weights()[k];
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const std::string obs = std::to_string(i + 1) + (species[i] == "concinna" ? "C" : "H");
            add(t, obs, cols[k] + " weight", r ? r->weights(static_cast<Eigen::Index>(i)) : NAN, ref[i], 0.05);
        }
    }
    // pattern at the concinna root: concinna weights > 0.9, at most one heptapotamica weight >= 0.01
    int c_high = 0, c_total = 0, h_low = 0, h_total = 0;
    if (concinna) {
        for (std::size_t i = 0; i < species.size(); ++i) {
            const double w = concinna->weights(static_cast<Eigen::Index>(i));
            if (species[i] == "concinna") {
                ++c_total;
                c_high += w > 0.9;
            } else {
                ++h_total;
                h_low += w < 0.01;
            }
        }
    }
    add(t, "concinna root", "concinna weights > 0.9", c_high, 21, 0.0);
    add(t, "concinna root", "heptapotamica weights < 0.01 (>= 21)", std::min(h_low, 21), 21, 0.0);
    return t;
}

} // namespace

const std::vector<std::array<double, 3>>& reference_mse(Scheme scheme)
{
    static const std::vector<std::array<double, 3>> scale{{.0339, .0385, .0434}, {.1179, .0526, .0577},
        {.1913, .0704, .0711}, {.2839, .1147, .1045}, {.3635, .1900, .1587}, {.4538, .2877, .2379}};
    static const std::vector<std::array<double, 3>> location{{.0323, .0356, .0429}, {.3668, .0631, .0526},
        {1.1414, .1487, .0907}, {2.4672, .5508, .4725}, {4.3454, 3.7214, 3.4854}, {6.4610, 11.0333, 10.7086}};
    static const std::vector<std::array<double, 3>> expo{{.0373, .0392, .0467}, {.0997, .0660, .0624},
        {.1919, .1557, .1525}, {.2797, .1997, .2094}, {.3563, .2974, .2637}, {.4223, .3764, .3497}};
    switch (scheme) {
    case Scheme::scale: return scale;
    case Scheme::location: return location;
    default: return expo;
    }
}

namespace {

TableReport simulation_table(const std::string& id, Scheme scheme, const ReproduceOptions& opt)
{
    TableReport t{id, "MSE under " + to_string(scheme) + " contamination, n = 30"};
    SimulationPlan plan = default_plan(scheme);
    plan.reps = opt.reps;
    plan.seed = opt.seed;
    plan.threads = opt.threads;
    const SimulationReport rep = run_simulation(plan);
    const auto& ref = reference_mse(scheme);
    for (std::size_t e = 0; e < plan.eps_grid.size(); ++e) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& cell = rep.cell(plan.eps_grid[e], plan.estimators[k].label);
            std::ostringstream label;
            label << "eps=" << plan.eps_grid[e] << ' ' << plan.estimators[k].label;
            add(t, label.str(), "mse", cell.mse, ref[e][k], e == 0 ? 0.10 : 0.25, true);
        }
    }
    for (std::size_t e = 1; e < plan.eps_grid.size(); ++e) {
        const double mle = rep.cell(plan.eps_grid[e], "MLE").mse;
        for (std::size_t k = 1; k < 3; ++k) {
            const double wle = rep.cell(plan.eps_grid[e], plan.estimators[k].label).mse;
            const bool reversal = scheme == Scheme::location && e + 1 == plan.eps_grid.size();
            std::ostringstream label;
            label << "eps=" << plan.eps_grid[e] << ' ' << plan.estimators[k].label;
            if (scheme != Scheme::location || reversal)
                add(t, label.str(), reversal ? "WLE mse > MLE mse" : "WLE mse < MLE mse",
                    reversal ? (wle > mle) : (wle < mle), 1.0, 0.0);
        }
    }
    std::ostringstream note;
    note << "replications " << plan.reps << ", seed " << plan.seed << ", bootstrap B=" << plan.solver.bootstrap_b
         << " m=" << plan.solver.bootstrap_m;
    t.notes.push_back(note.str());
    return t;
}

TableReport table10()
{
    TableReport t{"table10", "Hertzsprung-Russell stars, bivariate normal, gamma alpha=1.01"};
    const auto pts = pairs(load_dataset("hertzsprung_russell"), "log_te", "log_light");
    const BivariateNormalFamily family(CovarianceDivisor::weight_sum_minus_one);
    const ParamVector mle = family.mle(pts);
    const std::vector<std::string> names{"mu1", "mu2", "sigma1_2", "sigma2_2", "rho"};
    add_vector(t, "MLE", names, mle, {4.3100, 5.0121, 0.0846, 0.3263, -0.2104}, {5e-5, 5e-5, 5e-5, 5e-5, 5e-5});
    const Root r = solve_from(family, pts, ResidualConfig{}, GammaKernel{1.01}, SolverConfig{}, mle);
    add_vector(t, "WLE alpha=1.01", names, r.theta, {4.4222, 4.9264, 0.0111, 0.2479, 0.7919},
        {0.01, 0.01, 0.003, 0.003, 0.05});
    t.notes.push_back("covariance divisor sum(w) - 1, start at the sample mean and covariance");
    return t;
}

TableReport table11()
{
    TableReport t{"table11", "Lubischew beetles (width, angle), bivariate normal, gamma alpha=1.01"};
    const auto pts = pairs(load_dataset("lubischew"), "width", "angle");
    const BivariateNormalFamily family(CovarianceDivisor::weight_sum_minus_one);
    struct Case {
        std::string label;
        ParamVector start, root;
    };
    const std::vector<Case> cases{
        {"MLE-like", vec({142.1395, 12.0465, 39.6944, 4.9502, 7.3981}),
            vec({142.3043, 12.0047, 38.8846, 4.7480, 8.2486})},
        {"concinna", vec({146.1905, 14.0952, 31.6619, 0.7905, -0.9690}),
            vec({146.3370, 14.1297, 31.7987, 0.7805, -1.1087})},
        {"heptapotamica", vec({138.2727, 10.0909, 17.1602, 0.9437, -0.5022}),
            vec({138.2197, 10.0859, 16.7779, 0.9257, -0.5061})},
    };
    const std::vector<std::string> names{"mu1", "mu2", "var1", "var2", "cov12"};
    std::vector<ParamVector> found;
    for (const auto& c : cases) {
        const Root r = solve_from(family, pts, ResidualConfig{}, GammaKernel{1.01}, SolverConfig{}, from_covariance(c.start));
        const ParamVector cov = with_covariance(r.theta);
        add_vector(t, c.label + " root", names, cov,
            {c.root(0), c.root(1), c.root(2), c.root(3), c.root(4)}, {0.1, 0.1, 0.5, 0.5, 0.5});
        found.push_back(r.theta);
    }
    const bool distinct = root_distance(found[0], found[1]) > 1e-4 && root_distance(found[0], found[2]) > 1e-4
        && root_distance(found[1], found[2]) > 1e-4;
    add(t, "three starts", "distinct roots", distinct ? 1.0 : 0.0, 1.0, 0.0);
    t.notes.push_back("covariance divisor sum(w) - 1; variances and covariance reported");
    return t;
}

TableReport table12()
{
    TableReport t{"table12", "Animals, log brain weight on log body weight, F kernel d1=2.5 d2=1"};
    const Dataset d = load_dataset("animals");
    const auto body = d.numeric("body"), brain = d.numeric("brain");
    std::vector<RegressionPoint> pts;
    for (std::size_t i = 0; i < body.size(); ++i)
        pts.push_back({std::log(body[i]), std::log(brain[i])});
    const LinearRegressionFamily family;
    const ParamVector mle = family.mle(pts);
    const std::vector<std::string> names{"beta0", "beta1", "sigma"};
    // the printed scale is the residual standard error with n - 2 in the denominator
    const double n = static_cast<double>(pts.size());
    ParamVector ols = mle;
    ols(2) = mle(2) * std::sqrt(n / (n - 2));
    add_vector(t, "OLS", names, ols, {2.5549, 0.4960, 1.5320}, {5e-4, 5e-4, 5e-4});
    const Root r = solve_from(family, pts, ResidualConfig{}, ScaledFKernel{2.5, 1.0}, SolverConfig{}, mle);
    add_vector(t, "WLE", names, r.theta, {1.7858, 0.7785, 0.1575}, {0.01, 0.01, 0.01});
    return t;
}

TableReport table13(const ReproduceOptions& opt)
{
    TableReport t{"table13", "Voltage drop, linear regression, F kernel d1=2.5 d2=1"};
    const auto pts = regression_points(load_dataset("voltage_drop"), "time", "voltage");
    const LinearRegressionFamily family;
    const std::vector<std::string> names{"beta0", "beta1", "sigma"};
    add_vector(t, "MLE", names, family.mle(pts), {9.4855, 0.1860, 2.3301}, {0.05, 0.05, 0.05});
    SolverConfig sc;
    sc.seed = opt.seed;
    // subsamples of size 3 fit three parameters exactly, so most restarts collapse to sigma = 0
    sc.bootstrap_b = 200;
    const RootSet set = bootstrap_root_search(family, pts, ResidualConfig{}, ScaledFKernel{2.5, 1.0}, sc);
    const std::vector<ParamVector> refs{vec({9.4739, 0.1867, 2.2659}), vec({5.4565, 0.9335, 0.3854})};
    for (std::size_t k = 0; k < refs.size(); ++k) {
        const Root* r = nearest(set, refs[k]);
        add_vector(t, "root " + std::to_string(k + 1), names, r ? r->theta : ParamVector::Constant(3, NAN),
            {refs[k](0), refs[k](1), refs[k](2)}, {0.05, 0.05, 0.05});
    }
    // degenerate-fit root: only the slope and a collapsed scale are checked
    const Root* third = nullptr;
    for (const auto& r : set.roots)
        if (!third || std::abs(r.theta(1) + 0.6587) < std::abs(third->theta(1) + 0.6587))
            third = &r;
    add(t, "root 3", "beta1", third ? third->theta(1) : NAN, -0.6587, 0.05);
    add(t, "root 3", "sigma < 0.01", third ? third->theta(2) : NAN, 0.0, 0.01);
    for (const auto& r : set.roots)
        t.notes.push_back("root " + fmt(r.theta) + " weight sum " + std::to_string(r.weight_sum));
    for (const auto& f : set.failed)
        t.notes.push_back("restart " + std::to_string(f.restart) + " failed: " + f.reason);
    return t;
}

TableReport figure5()
{
    TableReport t{"figure5", "Population roots of the weighted score, N(mu,1) model, gamma alpha=1.05, p=1/2"};
    const WeightSpec spec = GammaKernel{1.05};
    const ResidualConfig rc;
    std::vector<double> grid;
    for (int i = 0; i <= 450; ++i)
        grid.push_back(-2.0 + 0.02 * i);
    auto scan = [&](double eps, double c) {
        ContaminationSpec cs;
        cs.base = normal_population(0.0, 1.0);
        cs.contaminant = normal_population(c, 1.0);
        cs.epsilon = eps;
        return mixture_root_scan(cs, spec, rc, grid).roots;
    };
    auto show = [](const std::vector<double>& r) {
        std::ostringstream os;
        os.precision(5);
        for (double v : r)
            os << ' ' << v;
        return os.str();
    };
    const auto r0 = scan(0.0, 5.0);
    add(t, "eps=0 c=5", "root count", static_cast<double>(r0.size()), 1, 0);
    add(t, "eps=0 c=5", "root", r0.empty() ? NAN : r0.front(), 0.0, 1e-3);
    for (double eps : {0.1, 0.2, 0.3}) {
        const auto r = scan(eps, 5.0);
        std::ostringstream label;
        label << "eps=" << eps << " c=5";
        add(t, label.str(), "root count", static_cast<double>(r.size()), 3, 0);
        if (eps == 0.2) {
            add(t, label.str(), "lowest root", r.empty() ? NAN : r.front(), 0.0, 0.3);
            add(t, label.str(), "highest root", r.empty() ? NAN : r.back(), 5.0, 0.3);
        }
        t.notes.push_back(label.str() + " roots:" + show(r));
    }
    for (double eps : {0.0, 0.1, 0.2, 0.3}) {
        const auto r = scan(eps, 4.0);
        std::ostringstream label;
        label << "eps=" << eps << " c=4";
        add(t, label.str(), "multiple roots", r.size() > 1 ? 1.0 : 0.0, eps >= 0.2 ? 1.0 : 0.0, 0);
        t.notes.push_back(label.str() + " roots:" + show(r));
    }
    return t;
}

} // namespace

std::vector<std::string> table_ids()
{
    return {"table2", "table3", "table4", "table5", "table6", "table7", "table8", "table9", "table10", "table11",
        "table12", "table13", "figure5"};
}

TableReport reproduce_table(const std::string& id, const ReproduceOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    TableReport t;
    if (id == "table2")
        t = table2();
    else if (id == "table3")
        t = table3();
    else if (id == "table4")
        t = table4();
    else if (id == "table5")
        t = table5(opt);
    else if (id == "table6")
        t = table6(opt);
    else if (id == "table7")
        t = simulation_table(id, Scheme::scale, opt);
    else if (id == "table8")
        t = simulation_table(id, Scheme::location, opt);
    else if (id == "table9")
        t = simulation_table(id, Scheme::exponential, opt);
    else if (id == "table10")
        t = table10();
    else if (id == "table11")
        t = table11();
    else if (id == "table12")
        t = table12();
    else if (id == "table13")
        t = table13(opt);
    else if (id == "figure5")
        t = figure5();
    else
        throw NotFound("unknown table id " + id);
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

} // namespace wle
