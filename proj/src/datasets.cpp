#include "wle/datasets.hpp"

#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wle {

namespace embedded {
extern const std::pair<std::string_view, std::string_view> files[];
extern const std::size_t file_count;
} // namespace embedded

namespace {

std::string_view embedded_file(std::string_view key)
{
    for (std::size_t i = 0; i < embedded::file_count; ++i)
        if (embedded::files[i].first == key)
            return embedded::files[i].second;
    throw NotFound("no bundled file " + std::string(key));
}

const nlohmann::json& manifest()
{
    static const nlohmann::json m = nlohmann::json::parse(embedded_file("manifest.json"));
    return m;
}

std::vector<std::string> split(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        std::string_view cell = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
            cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
            cell.remove_suffix(1);
        out.emplace_back(cell);
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

} // namespace

std::size_t Dataset::column_index(std::string_view column) const
{
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end())
        throw NotFound(name + ": no column " + std::string(column));
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Dataset::numeric(std::string_view column) const
{
    const std::size_t j = column_index(column);
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const std::string& cell = r[j];
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
            throw DomainError(name + ": non-numeric value '" + cell + "' in column " + std::string(column));
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> Dataset::text(std::string_view column) const
{
    const std::size_t j = column_index(column);
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back(r[j]);
    return out;
}

Dataset parse_dataset_csv(std::string_view name, std::string_view csv)
{
    Dataset d;
    d.name = std::string(name);
    std::size_t pos = 0;
    bool header = true;
    while (pos < csv.size()) {
        auto end = csv.find('\n', pos);
        if (end == std::string_view::npos)
            end = csv.size();
        std::string_view line = csv.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        auto cells = split(line);
        if (header) {
            d.columns = std::move(cells);
            header = false;
            continue;
        }
        if (cells.size() != d.columns.size())
            throw DomainError(d.name + ": record with " + std::to_string(cells.size()) + " fields, expected "
                + std::to_string(d.columns.size()));
        d.records.push_back(std::move(cells));
    }
    if (header)
        throw DomainError(d.name + ": missing header row");
    return d;
}

std::uint32_t crc32_of(std::string_view bytes)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

void verify_checksum(std::string_view name, std::string_view bytes, std::string_view expected_hex)
{
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", crc32_of(bytes));
    if (expected_hex != buf)
        throw ChecksumError(std::string(name) + ": checksum " + buf + " does not match manifest "
            + std::string(expected_hex));
}

std::vector<std::string> bundled_dataset_names()
{
    std::vector<std::string> out;
    for (const auto& d : manifest().at("datasets"))
        out.push_back(d.at("name").get<std::string>());
    return out;
}

Dataset load_dataset(std::string_view name)
{
    for (const auto& entry : manifest().at("datasets")) {
        if (entry.at("name").get<std::string>() != name)
            continue;
        const std::string_view bytes = embedded_file(entry.at("file").get<std::string>());
        verify_checksum(name, bytes, entry.at("crc32").get<std::string>());
        Dataset d = parse_dataset_csv(name, bytes);
        d.provenance = entry.at("provenance").get<std::string>();
        if (d.size() != entry.at("rows").get<std::size_t>())
            throw ChecksumError(d.name + ": record count differs from manifest");
        return d;
    }
    if (manifest().contains("unavailable")) {
        for (const auto& entry : manifest().at("unavailable"))
            if (entry.at("name").get<std::string>() == name)
                throw NotFound(std::string(name) + ": not bundled. " + entry.at("reason").get<std::string>());
    }
    throw NotFound("unknown dataset " + std::string(name));
}

Dataset load_dataset_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFound("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset_csv(path, ss.str());
}

std::vector<Vector2> pairs(const Dataset& d, std::string_view x, std::string_view y)
{
    const auto a = d.numeric(x), b = d.numeric(y);
    std::vector<Vector2> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.emplace_back(a[i], b[i]);
    return out;
}

std::vector<RegressionPoint> regression_points(const Dataset& d, std::string_view x, std::string_view y)
{
    const auto a = d.numeric(x), b = d.numeric(y);
    std::vector<RegressionPoint> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back({a[i], b[i]});
    return out;
}

} // namespace wle
