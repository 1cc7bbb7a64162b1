#pragma once

// CSV result tables: a '#'-prefixed metadata block, one header line, rows.

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace decolab {

/// A cell is a finite number, a text token, or empty (undefined value).
using Cell = std::variant<std::monostate, double, std::string>;

class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns);

    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] const std::vector<Cell>& row(std::size_t i) const { return rows_.at(i); }

    void set_metadata(std::string key, std::string value);
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return meta_; }

    /// Throws DomainError on a column-count mismatch or a non-finite number.
    void add_row(std::vector<Cell> cells);

    /// Numbers use 17 significant digits so output is reproducible byte for byte.
    [[nodiscard]] std::string to_csv() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<Cell>> rows_;
};

namespace schema {
inline const std::vector<std::string> visibility{"tau", "nu", "fringe_spacing", "status"};
inline const std::vector<std::string> moments{"tau", "re_mean_a", "im_mean_a", "mean_n", "stderr_n"};
inline const std::vector<std::string> wigner{"x", "p", "w"};
inline const std::vector<std::string> pdensity{"tau", "x", "p_of_x"};
inline const std::vector<std::string> negativity{"tau", "negativity"};
}  // namespace schema

}  // namespace decolab
