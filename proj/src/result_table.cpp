#include "decolab/result_table.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "decolab/errors.hpp"

namespace decolab {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw DomainError("result table needs at least one column");
}

void ResultTable::set_metadata(std::string key, std::string value) {
    for (auto& [k, v] : meta_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    meta_.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size()) {
        throw DomainError(fmt::format("row has {} cells, schema has {} columns", cells.size(), columns_.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (const double* d = std::get_if<double>(&cells[c]); d != nullptr && !std::isfinite(*d)) {
            throw DomainError(fmt::format("non-finite value in column '{}'", columns_[c]));
        }
    }
    rows_.push_back(std::move(cells));
}

namespace {

std::string render(const Cell& cell) {
    if (const double* d = std::get_if<double>(&cell)) return fmt::format("{:.17g}", *d);
    if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
    return {};
}

}  // namespace

std::string ResultTable::to_csv() const {
    std::string out;
    for (const auto& [k, v] : meta_) out += fmt::format("# {}: {}\n", k, v);
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += render(row[c]);
        }
        out += '\n';
    }
    return out;
}

void ResultTable::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError(fmt::format("cannot open '{}' for writing", path.string()));
    file << to_csv();
    if (!file) throw DomainError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace decolab
