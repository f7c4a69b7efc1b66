#pragma once

#include "wle/simulation.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace wle {

struct TableRow {
    std::string label;
    std::string quantity;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool relative = false; // tolerance is a fraction of |expected|
    bool pass = false;

    double abs_dev() const { return std::abs(computed - expected); }
    double rel_dev() const { return expected != 0.0 ? abs_dev() / std::abs(expected) : abs_dev(); }
    void judge();
    bool operator==(const TableRow&) const = default;
};

struct TableReport {
    std::string table_id;
    std::string title;
    bool available = true; // false when a required dataset is not bundled
    std::vector<TableRow> rows{};
    std::vector<std::string> notes{};
    double seconds = 0.0;

    bool passed() const;
    bool operator==(const TableReport&) const = default;
};

struct ReproduceOptions {
    int reps = 1000;       // Monte Carlo replications for the simulation tables
    unsigned threads = 0;  // 0: hardware concurrency
    std::uint64_t seed = 20240607;
};

std::vector<std::string> table_ids();

// Runs the documented configuration for a table or figure and compares with reference values.
// Throws NotFound for unknown ids.
TableReport reproduce_table(const std::string& table_id, const ReproduceOptions& options = {});

// Reference MSE values for the simulation tables, indexed [epsilon][MLE, alpha=1.01, alpha=1.02].
const std::vector<std::array<double, 3>>& reference_mse(Scheme scheme);

} // namespace wle
