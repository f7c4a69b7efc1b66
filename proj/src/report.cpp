#include "wle/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <sstream>

namespace wle {

using ordered_json = nlohmann::ordered_json;

Format parse_format(std::string_view s)
{
    if (s == "json")
        return Format::json;
    if (s == "csv")
        return Format::csv;
    throw InvalidSpec("unknown report format '" + std::string(s) + "'");
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_num(std::string_view s)
{
    if (s == "nan" || s == "NA")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InvalidSpec("bad number '" + std::string(s) + "'");
    return v;
}

template <class Int>
Int parse_int(std::string_view s)
{
    Int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InvalidSpec("bad integer '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + '"';
}

ordered_json json_num(double v)
{
    // JSON has no NaN or infinity
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

std::string join(const std::vector<std::string>& v, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? std::string(1, sep) : "") + v[i];
    return out;
}

} // namespace

std::string export_report(const SimulationReport& r, Format format)
{
    if (format == Format::json) {
        ordered_json j;
        j["version"] = report_version;
        j["kind"] = "simulation";
        j["scheme"] = to_string(r.scheme);
        j["n"] = r.n;
        j["reps"] = r.reps;
        j["seed"] = r.seed;
        j["target"] = r.target;
        j["eps_grid"] = r.eps_grid;
        j["estimators"] = r.estimators;
        j["cells"] = ordered_json::array();
        for (const auto& c : r.cells)
            j["cells"].push_back(ordered_json{{"epsilon", c.epsilon}, {"estimator", c.estimator}, {"mse", json_num(c.mse)},
                {"mc_se", json_num(c.mc_se)}, {"failures", c.failures}, {"mean_root_count", json_num(c.mean_root_count)},
                {"multiple_root_reps", c.multiple_root_reps}});
        j["replications"] = ordered_json::array();
        for (const auto& x : r.replications)
            j["replications"].push_back(ordered_json{{"eps_index", x.eps_index}, {"estimator_index", x.estimator_index},
                {"replication", x.replication}, {"estimate", x.estimate ? ordered_json(*x.estimate) : ordered_json(nullptr)},
                {"root_count", x.root_count}});
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# version=" << report_version << "\n# scheme=" << to_string(r.scheme) << "\n# n=" << r.n
       << "\n# reps=" << r.reps << "\n# seed=" << r.seed << "\n# target=" << num(r.target) << "\n# eps_grid=";
    for (std::size_t i = 0; i < r.eps_grid.size(); ++i)
        os << (i ? ";" : "") << num(r.eps_grid[i]);
    os << "\n# estimators=" << join(r.estimators, ';') << "\n";
    os << "epsilon,estimator,replication,estimate,root_count\n";
    for (const auto& x : r.replications)
        os << num(r.eps_grid.at(x.eps_index)) << ',' << csv_field(r.estimators.at(x.estimator_index)) << ','
           << x.replication << ',' << (x.estimate ? num(*x.estimate) : "NA") << ',' << x.root_count << '\n';
    return os.str();
}

SimulationReport import_simulation_report(std::string_view bytes, Format format)
{
    SimulationReport r;
    if (format == Format::json) {
        ordered_json j;
        try {
            j = ordered_json::parse(bytes);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidSpec(std::string("report json: ") + e.what());
        }
        if (j.value("version", 0) != report_version || j.value("kind", "") != "simulation")
            throw InvalidSpec("not a version " + std::to_string(report_version) + " simulation report");
        auto num_or_nan = [](const ordered_json& v) {
            return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        };
        r.scheme = parse_scheme(j.at("scheme").get<std::string>());
        r.n = j.at("n");
        r.reps = j.at("reps");
        r.seed = j.at("seed");
        r.target = j.at("target");
        r.eps_grid = j.at("eps_grid").get<std::vector<double>>();
        r.estimators = j.at("estimators").get<std::vector<std::string>>();
        for (const auto& c : j.at("cells"))
            r.cells.push_back({c.at("epsilon"), c.at("estimator"), num_or_nan(c.at("mse")), num_or_nan(c.at("mc_se")),
                c.at("failures"), num_or_nan(c.at("mean_root_count")), c.at("multiple_root_reps")});
        for (const auto& x : j.at("replications")) {
            ReplicationRecord rec;
            rec.eps_index = x.at("eps_index");
            rec.estimator_index = x.at("estimator_index");
            rec.replication = x.at("replication");
            if (!x.at("estimate").is_null())
                rec.estimate = x.at("estimate").get<double>();
            rec.root_count = x.at("root_count");
            r.replications.push_back(rec);
        }
        return r;
    }

    std::istringstream is{std::string(bytes)};
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string_view val = std::string_view(line).substr(eq + 1);
            if (key == "version" && parse_int<int>(val) != report_version)
                throw InvalidSpec("unsupported report version");
            else if (key == "scheme")
                r.scheme = parse_scheme(val);
            else if (key == "n")
                r.n = parse_int<int>(val);
            else if (key == "reps")
                r.reps = parse_int<int>(val);
            else if (key == "seed")
                r.seed = parse_int<std::uint64_t>(val);
            else if (key == "target")
                r.target = parse_num(val);
            else if (key == "eps_grid")
                for (auto v : split(val, ';'))
                    r.eps_grid.push_back(parse_num(v));
            else if (key == "estimators")
                for (auto v : split(val, ';'))
                    r.estimators.emplace_back(v);
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        // estimator labels never contain commas in practice; quoted labels are unwrapped
        std::vector<std::string_view> f = split(line, ',');
        if (f.size() != 5)
            throw InvalidSpec("bad replication row: " + line);
        ReplicationRecord rec;
        const double eps = parse_num(f[0]);
        std::string label(f[1]);
        if (label.size() >= 2 && label.front() == '"')
            label = label.substr(1, label.size() - 2);
        const auto ei = std::find(r.eps_grid.begin(), r.eps_grid.end(), eps);
        const auto ki = std::find(r.estimators.begin(), r.estimators.end(), label);
        if (ei == r.eps_grid.end() || ki == r.estimators.end())
            throw InvalidSpec("replication row outside the grid: " + line);
        rec.eps_index = static_cast<int>(ei - r.eps_grid.begin());
        rec.estimator_index = static_cast<int>(ki - r.estimators.begin());
        rec.replication = parse_int<int>(f[2]);
        if (f[3] != "NA")
            rec.estimate = parse_num(f[3]);
        rec.root_count = parse_int<int>(f[4]);
        r.replications.push_back(rec);
    }
    summarize(r);
    return r;
}

std::string export_report(const TableReport& t, Format format)
{
    if (format == Format::json) {
        ordered_json j;
        j["version"] = report_version;
        j["kind"] = "table";
        j["table_id"] = t.table_id;
        j["title"] = t.title;
        j["available"] = t.available;
        j["passed"] = t.passed();
        j["seconds"] = t.seconds;
        j["rows"] = ordered_json::array();
        for (const auto& row : t.rows)
            j["rows"].push_back(ordered_json{{"label", row.label}, {"quantity", row.quantity},
                {"computed", json_num(row.computed)}, {"expected", row.expected},
                {"abs_dev", json_num(row.abs_dev())}, {"rel_dev", json_num(row.rel_dev())},
                {"tolerance", row.tolerance}, {"relative", row.relative}, {"pass", row.pass}});
        j["notes"] = t.notes;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "table,label,quantity,computed,expected,abs_dev,rel_dev,tolerance,relative,pass\n";
    for (const auto& row : t.rows)
        os << t.table_id << ',' << csv_field(row.label) << ',' << csv_field(row.quantity) << ',' << num(row.computed)
           << ',' << num(row.expected) << ',' << num(row.abs_dev()) << ',' << num(row.rel_dev()) << ','
           << num(row.tolerance) << ',' << (row.relative ? "rel" : "abs") << ',' << (row.pass ? "PASS" : "FAIL")
           << '\n';
    return os.str();
}

std::string export_report(const RootSet& set, const std::vector<std::string>& names, Format format)
{
    if (format == Format::json) {
        ordered_json j;
        j["version"] = report_version;
        j["kind"] = "roots";
        j["parameters"] = names;
        j["sample_size"] = set.sample_size;
        j["restarts"] = set.restarts;
        j["skipped_subsamples"] = set.skipped_subsamples;
        j["selected"] = set.selected;
        j["rule"] = to_string(set.rule);
        j["roots"] = ordered_json::array();
        for (const auto& r : set.roots) {
            std::vector<double> th(r.theta.data(), r.theta.data() + r.theta.size());
            j["roots"].push_back(ordered_json{{"theta", th}, {"weight_sum", r.weight_sum}, {"iterations", r.iterations},
                {"converged", r.converged}, {"objective_residual", json_num(r.objective_residual)}, {"hits", r.hits}});
        }
        j["failed"] = ordered_json::array();
        for (const auto& f : set.failed)
            j["failed"].push_back(ordered_json{{"restart", f.restart}, {"reason", f.reason}});
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "root," << join(names, ',') << ",weight_sum,iterations,hits,selected\n";
    for (std::size_t k = 0; k < set.roots.size(); ++k) {
        const auto& r = set.roots[k];
        os << k;
        for (Eigen::Index i = 0; i < r.theta.size(); ++i)
            os << ',' << num(r.theta(i));
        os << ',' << num(r.weight_sum) << ',' << r.iterations << ',' << r.hits << ',' << (k == set.selected ? 1 : 0)
           << '\n';
    }
    return os.str();
}

} // namespace wle
