#include "wle/solver.hpp"

#include <algorithm>

namespace wle {

void SolverConfig::validate(int dimension) const
{
    if (!(tolerance > 0) || max_iterations < 1)
        throw InvalidSpec("solver needs a positive tolerance and at least one iteration");
    if (bootstrap_b < 1)
        throw InvalidSpec("bootstrap restart count must be at least 1");
    if (bootstrap_m < dimension)
        throw InvalidSpec("bootstrap subsample size must be at least the parameter dimension");
    if (!(root_tolerance > 0 && root_tolerance < 1) || !(min_weight_share > 0 && min_weight_share < 1))
        throw InvalidSpec("root tolerance and weight share must lie in (0, 1)");
}

std::string to_string(SelectionRule rule)
{
    switch (rule) {
    case SelectionRule::single_root: return "single_root";
    case SelectionRule::second_highest: return "second_highest";
    default: return "highest_fallback";
    }
}

double root_distance(const ParamVector& a, const ParamVector& b)
{
    return sup_norm(a - b) / (1.0 + sup_norm(a));
}

void apply_selection(RootSet& set, const SolverConfig& config)
{
    if (set.roots.empty())
        return;
    if (set.roots.size() == 1) {
        set.selected = 0;
        set.rule = SelectionRule::single_root;
        return;
    }
    const double threshold = config.min_weight_share * static_cast<double>(set.sample_size);
    if (set.roots[1].weight_sum >= threshold) {
        set.selected = 1;
        set.rule = SelectionRule::second_highest;
    } else {
        set.selected = 0;
        set.rule = SelectionRule::highest_fallback;
    }
}

Root select_root(const RootSet& roots, const SolverConfig& config)
{
    if (roots.roots.empty())
        throw NotFound("root set is empty");
    RootSet copy;
    copy.roots = roots.roots;
    copy.sample_size = roots.sample_size;
    std::stable_sort(copy.roots.begin(), copy.roots.end(),
        [](const Root& a, const Root& b) { return a.weight_sum > b.weight_sum; });
    apply_selection(copy, config);
    return copy.roots[copy.selected];
}

RootSet cluster_roots(std::vector<Root> candidates, std::size_t sample_size, const SolverConfig& config)
{
    RootSet set;
    set.sample_size = sample_size;
    for (auto& r : candidates) {
        if (!r.converged)
            continue;
        auto it = std::find_if(set.roots.begin(), set.roots.end(),
            [&](const Root& q) { return root_distance(q.theta, r.theta) <= config.root_tolerance; });
        if (it == set.roots.end())
            set.roots.push_back(std::move(r));
        else
            ++it->hits;
    }
    std::stable_sort(set.roots.begin(), set.roots.end(),
        [](const Root& a, const Root& b) { return a.weight_sum > b.weight_sum; });
    apply_selection(set, config);
    return set;
}

} // namespace wle
