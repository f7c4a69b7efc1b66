#pragma once

#include "wle/core.hpp"
#include "wle/models.hpp"
#include "wle/parallel.hpp"
#include "wle/residuals.hpp"
#include "wle/rng.hpp"
#include "wle/weights.hpp"

#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace wle {

struct SolverConfig {
    double tolerance = 1e-8; // relative parameter change
    int max_iterations = 500;
    int bootstrap_b = 50;
    int bootstrap_m = 3;
    double root_tolerance = 1e-4;
    double min_weight_share = 0.25;
    std::uint64_t seed = 20240607;
    unsigned threads = 1;

    void validate(int dimension) const;
};

struct Root {
    ParamVector theta;
    Eigen::VectorXd weights;
    double weight_sum = 0.0;
    int iterations = 0;
    bool converged = false;
    double objective_residual = 0.0; // sup norm of sum_i w_i u(X_i) at theta
    ParamVector start;
    int hits = 1; // restarts that landed on this root
};

enum class SelectionRule { single_root, second_highest, highest_fallback };

std::string to_string(SelectionRule rule);

struct FailedRun {
    int restart = 0; // 0 is the full-sample MLE start, b >= 1 the bootstrap starts
    ParamVector start;
    std::string reason;
    std::vector<double> last_theta; // empty when the run threw
};

struct RootSet {
    std::vector<Root> roots; // distinct, sorted by weight sum descending
    std::size_t selected = 0;
    SelectionRule rule = SelectionRule::single_root;
    std::size_t sample_size = 0;
    int restarts = 0;
    int skipped_subsamples = 0;
    std::vector<FailedRun> failed;

    const Root& selected_root() const { return roots.at(selected); }
};

// Relative sup-norm distance with scale guard 1 + |a|_inf.
double root_distance(const ParamVector& a, const ParamVector& b);

// Second-highest weight sum if it reaches share * n, else the highest.
Root select_root(const RootSet& roots, const SolverConfig& config);

// Sets roots.selected and roots.rule by the selection rule.
void apply_selection(RootSet& roots, const SolverConfig& config);

// Merges converged roots closer than the root tolerance, then sorts and selects.
RootSet cluster_roots(std::vector<Root> candidates, std::size_t sample_size, const SolverConfig& config);

template <class Family>
struct EmpiricalFor {
    using type = EmpiricalFunctions;
};
template <>
struct EmpiricalFor<BivariateNormalFamily> {
    using type = EmpiricalQuadrants;
};
template <>
struct EmpiricalFor<LinearRegressionFamily> {
    using type = std::monostate;
};

// The weighted estimating equation for one sample: residuals, weights, score sums.
template <class Family>
class WeightedProblem {
public:
    using Observation = typename Family::Observation;
    using Sample = std::vector<Observation>;

    WeightedProblem(Family family, Sample sample, ResidualConfig residual, WeightSpec weight)
        : family_(std::move(family)), sample_(std::move(sample)), residual_(residual), weight_(weight),
          empirical_(make_empirical(sample_))
    {
        residual_.validate();
        wle::validate(weight_);
        require_sample(family_, sample_);
    }

    const Family& family() const { return family_; }
    const Sample& sample() const { return sample_; }
    const ResidualConfig& residual_config() const { return residual_; }
    const WeightSpec& weight_spec() const { return weight_; }
    std::size_t size() const { return sample_.size(); }

    Eigen::VectorXd residuals(const ParamVector& theta) const
    {
        if constexpr (std::is_same_v<Family, LinearRegressionFamily>)
            return residual_vector(residual_, family_, theta, sample_);
        else
            return residual_vector(residual_, empirical_, family_, theta, sample_);
    }

    Eigen::VectorXd weights(const ParamVector& theta) const
    {
        const Eigen::VectorXd tau = residuals(theta);
        Eigen::VectorXd w(tau.size());
        for (Eigen::Index i = 0; i < tau.size(); ++i)
            w(i) = weight(weight_, tau(i));
        return w;
    }

    ParamVector weighted_score(const ParamVector& theta, const Eigen::VectorXd& w) const
    {
        ParamVector s = ParamVector::Zero(family_.dimension());
        for (std::size_t i = 0; i < sample_.size(); ++i)
            if (w(i) != 0.0)
                s += w(i) * family_.score(theta, sample_[i]);
        return s;
    }

    double objective_residual(const ParamVector& theta) const
    {
        return sup_norm(weighted_score(theta, weights(theta)));
    }

private:
    static typename EmpiricalFor<Family>::type make_empirical(const Sample& s)
    {
        if constexpr (std::is_same_v<Family, LinearRegressionFamily>)
            return {};
        else
            return typename EmpiricalFor<Family>::type(s);
    }

    Family family_;
    Sample sample_;
    ResidualConfig residual_;
    WeightSpec weight_;
    typename EmpiricalFor<Family>::type empirical_;
};

// Fixed-point iteration theta <- weighted_closed_form(w(theta)).
// Throws DegenerateError if the weights collapse; non-convergence is reported, not thrown.
template <class Family>
Root solve_from(const WeightedProblem<Family>& problem, const SolverConfig& config, const ParamVector& theta0)
{
    const Family& family = problem.family();
    require_parameter(family, theta0);
    Root root;
    root.start = theta0;
    ParamVector theta = theta0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        const Eigen::VectorXd w = problem.weights(theta);
        if (!(w.sum() >= 1e-12))
            throw DegenerateError("total weight fell below 1e-12");
        const ParamVector next = family.weighted_closed_form(problem.sample(), w);
        const double change =
            ((next - theta).cwiseAbs().array() / (1.0 + theta.cwiseAbs().array())).maxCoeff();
        theta = next;
        root.iterations = it;
        if (change < config.tolerance) {
            root.converged = true;
            break;
        }
    }
    root.theta = theta;
    root.weights = problem.weights(theta);
    root.weight_sum = root.weights.sum();
    root.objective_residual = sup_norm(problem.weighted_score(theta, root.weights));
    return root;
}

template <class Family>
Root solve_from(const Family& family, const std::vector<typename Family::Observation>& sample,
    const ResidualConfig& residual, const WeightSpec& weight, const SolverConfig& config, const ParamVector& theta0)
{
    return solve_from(WeightedProblem<Family>(family, sample, residual, weight), config, theta0);
}

template <class Family>
RootSet bootstrap_root_search(const WeightedProblem<Family>& problem, const SolverConfig& config)
{
    const Family& family = problem.family();
    config.validate(family.dimension());
    const auto& sample = problem.sample();
    const std::size_t n = sample.size();
    if (n < static_cast<std::size_t>(config.bootstrap_m))
        throw DomainError("sample smaller than the bootstrap subsample size");

    const int restarts = config.bootstrap_b + 1;
    struct Outcome {
        bool skipped = false;
        bool ok = false;
        Root root;
        FailedRun failure;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(restarts));

    parallel_for(outcomes.size(), config.threads, [&](std::size_t r) {
        Outcome& out = outcomes[r];
        ParamVector start;
        try {
            if (r == 0) {
                start = family.mle(sample);
            } else {
                RandomStream rng(config.seed, stream_id({r}));
                std::vector<typename Family::Observation> sub;
                sub.reserve(static_cast<std::size_t>(config.bootstrap_m));
                for (int j = 0; j < config.bootstrap_m; ++j)
                    sub.push_back(sample[rng.index(n)]);
                start = family.mle(sub);
            }
            if (!family.in_parameter_space(start))
                throw DegenerateError("start outside parameter space");
        } catch (const Error&) {
            out.skipped = true;
            return;
        }
        out.failure.restart = static_cast<int>(r);
        out.failure.start = start;
        try {
            out.root = solve_from(problem, config, start);
            if (out.root.converged) {
                out.ok = true;
            } else {
                out.failure.reason = "max_iterations";
                out.failure.last_theta.assign(out.root.theta.data(), out.root.theta.data() + out.root.theta.size());
            }
        } catch (const DegenerateError& e) {
            out.failure.reason = std::string("degenerate: ") + e.what();
        } catch (const NumericError& e) {
            out.failure.reason = std::string("numeric: ") + e.what();
        }
    });

    std::vector<Root> converged;
    RootSet set;
    for (auto& out : outcomes) {
        if (out.skipped)
            ++set.skipped_subsamples;
        else if (out.ok)
            converged.push_back(std::move(out.root));
        else
            set.failed.push_back(std::move(out.failure));
    }
    RootSet clustered = cluster_roots(std::move(converged), n, config);
    clustered.restarts = restarts;
    clustered.skipped_subsamples = set.skipped_subsamples;
    clustered.failed = std::move(set.failed);
    return clustered;
}

template <class Family>
RootSet bootstrap_root_search(const Family& family, const std::vector<typename Family::Observation>& sample,
    const ResidualConfig& residual, const WeightSpec& weight, const SolverConfig& config)
{
    return bootstrap_root_search(WeightedProblem<Family>(family, sample, residual, weight), config);
}

} // namespace wle
