#pragma once

#include "wle/residuals.hpp"
#include "wle/solver.hpp"
#include "wle/weights.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wle {

// scale: (1-e) N(0,1) + e N(0,25); location: (1-e) N(0,1) + e N(5,1);
// exponential: (1-e) Exp(rate 1) + e Exp(rate 1/5)
enum class Scheme { scale, location, exponential };

std::string to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct EstimatorSpec {
    std::string label;
    std::optional<WeightSpec> weight; // empty: maximum likelihood
};

struct SimulationPlan {
    Scheme scheme = Scheme::scale;
    std::vector<double> eps_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    int n = 30;
    int reps = 1000;
    std::vector<EstimatorSpec> estimators;
    std::uint64_t seed = 20240607;
    SolverConfig solver;
    ResidualConfig residual;
    unsigned threads = 1;

    // true value of the reported component (normal mean, exponential rate)
    double target() const { return scheme == Scheme::exponential ? 1.0 : 0.0; }
    void validate() const;
};

// MLE plus gamma kernels with alpha = 1.01 and 1.02.
SimulationPlan default_plan(Scheme scheme);

struct ReplicationRecord {
    int eps_index = 0;
    int estimator_index = 0;
    int replication = 0;
    std::optional<double> estimate; // empty when no root converged
    int root_count = 0;

    bool operator==(const ReplicationRecord&) const = default;
};

struct SimulationCell {
    double epsilon = 0.0;
    std::string estimator;
    double mse = 0.0;
    double mc_se = 0.0; // standard error of the MSE
    int failures = 0;
    double mean_root_count = 0.0;
    int multiple_root_reps = 0;

    bool operator==(const SimulationCell&) const = default;
};

struct SimulationReport {
    Scheme scheme = Scheme::scale;
    int n = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    double target = 0.0;
    std::vector<double> eps_grid;
    std::vector<std::string> estimators;
    std::vector<SimulationCell> cells;
    std::vector<ReplicationRecord> replications;

    const SimulationCell& cell(double epsilon, std::string_view estimator) const;
    bool operator==(const SimulationReport&) const = default;
};

std::vector<double> draw_contaminated_sample(Scheme scheme, double epsilon, int n, RandomStream& rng);

SimulationReport run_simulation(const SimulationPlan& plan);

// Recomputes cells from the replication records (ordered reduction).
void summarize(SimulationReport& report);

} // namespace wle
