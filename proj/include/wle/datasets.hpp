#pragma once

#include "wle/core.hpp"
#include "wle/models.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wle {

struct Dataset {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> records;
    std::string provenance;

    std::size_t size() const { return records.size(); }
    std::size_t column_index(std::string_view column) const;
    std::vector<double> numeric(std::string_view column) const;
    std::vector<std::string> text(std::string_view column) const;
};

// Header row, comma-separated, dot decimal. Blank lines are skipped.
Dataset parse_dataset_csv(std::string_view name, std::string_view csv);

// Bundled dataset by name, checked against the manifest's crc32 and row count.
// Throws NotFound for unknown or unbundled names, ChecksumError on mismatch.
Dataset load_dataset(std::string_view name);

Dataset load_dataset_file(const std::string& path);

std::vector<std::string> bundled_dataset_names();

std::uint32_t crc32_of(std::string_view bytes);

// Throws ChecksumError unless bytes hash to the expected "%08x" crc32.
void verify_checksum(std::string_view name, std::string_view bytes, std::string_view expected_hex);

std::vector<Vector2> pairs(const Dataset& d, std::string_view x, std::string_view y);
std::vector<RegressionPoint> regression_points(const Dataset& d, std::string_view x, std::string_view y);

} // namespace wle
