#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ptl/context.hpp"

namespace ptl {

/// %.12g rendering used for every real number the library prints.
std::string format_real(double v);

/// Named columns sampled on a strictly increasing integer grid.
class CountSeries {
public:
    explicit CountSeries(std::vector<std::uint64_t> x_grid);

    /// Throws DomainError on a duplicate name or a length mismatch.
    void add_column(std::string name, std::vector<double> values);

    const std::vector<std::uint64_t>& x() const { return x_; }
    const std::vector<std::pair<std::string, std::vector<double>>>& columns() const { return columns_; }
    const std::vector<double>& column(const std::string& name) const;

    /// Header row "x,<names>", one row per grid point, '\n' line endings.
    std::string to_csv() const;

private:
    std::vector<std::uint64_t> x_;
    std::vector<std::pair<std::string, std::vector<double>>> columns_;
};

/// Evenly spaced integer grid over [lo, hi] with at most `points` distinct entries.
std::vector<std::uint64_t> integer_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points);

inline constexpr double kFigureTwinConstant = 1.32032362;

/// Series for plots 1-10: prime and twin-prime counts against their smooth
/// approximations over fixed ranges. A range that would start at 1 begins at 2
/// when a column needs log x or li_k.
CountSeries figure_series(int figure_id, std::size_t resolution, const Context& ctx = {});

}  // namespace ptl
