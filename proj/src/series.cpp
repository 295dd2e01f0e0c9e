#include "ptl/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ptl/analytic.hpp"
#include "ptl/error.hpp"
#include "ptl/numeric.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CountSeries::CountSeries(std::vector<std::uint64_t> x_grid) : x_(std::move(x_grid)) {
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (x_[i] <= x_[i - 1]) throw DomainError("x grid must be strictly increasing");
}

void CountSeries::add_column(std::string name, std::vector<double> values) {
    if (name == "x") throw DomainError("column name 'x' is reserved");
    for (const auto& [existing, _] : columns_)
        if (existing == name) throw DomainError("duplicate column " + name);
    if (values.size() != x_.size()) throw DomainError("column " + name + " has the wrong length");
    columns_.emplace_back(std::move(name), std::move(values));
}

const std::vector<double>& CountSeries::column(const std::string& name) const {
    for (const auto& [existing, values] : columns_)
        if (existing == name) return values;
    throw DomainError("no column named " + name);
}

std::string CountSeries::to_csv() const {
    std::string out = "x";
    for (const auto& [name, _] : columns_) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < x_.size(); ++i) {
        out += std::to_string(x_[i]);
        for (const auto& [_, values] : columns_) out += "," + format_real(values[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::uint64_t> integer_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points) {
    if (hi < lo) throw DomainError("grid requires lo <= hi");
    if (points < 2) throw DomainError("grid resolution must be at least 2");
    std::vector<std::uint64_t> grid;
    grid.reserve(points);
    const u128 span = hi - lo;
    for (std::size_t i = 0; i < points; ++i) {
        const auto x = lo + static_cast<std::uint64_t>(span * i / (points - 1));
        if (grid.empty() || x > grid.back()) grid.push_back(x);
    }
    return grid;
}

namespace {

// Step-function count of primes (offset 0) or twin lower members (offset 2) at each grid point.
std::vector<double> counts_on_grid(const std::vector<std::uint64_t>& grid, bool twins,
                                   const Context& ctx) {
    std::vector<double> out(grid.size(), 0.0);
    const std::uint64_t top = grid.back() + (twins ? 2 : 0);
    if (top < 2) return out;
    const auto primes = sieve_range(2, top, ctx).primes();
    std::uint64_t count = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (; j < primes.size() && primes[j] <= grid[i]; ++j)
            if (!twins || (j + 1 < primes.size() && primes[j + 1] == primes[j] + 2)) ++count;
        out[i] = static_cast<double>(count);
    }
    return out;
}

// li_k on the grid, accumulated panel by panel from li_k(grid[0]).
std::vector<double> li_on_grid(const std::vector<std::uint64_t>& grid, unsigned k, const Context& ctx) {
    std::vector<double> out(grid.size());
    double value = li_k(static_cast<double>(grid[0]), k, 0.0, ctx).value;
    out[0] = value;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double a = static_cast<double>(grid[i - 1]);
        const double b = static_cast<double>(grid[i]);
        const double tol = ctx.quad_rel_tol * std::max(1.0, (b - a) / std::pow(std::log(b), static_cast<int>(k)));
        value += integrate_inverse_log_power(a, b, k, tol).value;
        out[i] = value;
    }
    return out;
}

std::vector<double> x_over_log_power(const std::vector<std::uint64_t>& grid, int k, double scale = 1.0) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (auto x : grid) {
        const double xd = static_cast<double>(x);
        out.push_back(scale * xd / std::pow(std::log(xd), k));
    }
    return out;
}

}  // namespace

CountSeries figure_series(int figure_id, std::size_t resolution, const Context& ctx) {
    struct FigureRange {
        std::uint64_t lo, hi;
    };
    static constexpr FigureRange ranges[] = {
        {1, 100},     {1, 1000},    {1, 1000000},       {2, 1000000},  {1000000, 1100000},
        {0, 100},     {2, 1000},    {2, 1000000},       {2, 1000000},  {2, 1000000},
    };
    if (figure_id < 1 || figure_id > 10) throw DomainError("unknown figure id " + std::to_string(figure_id));
    const auto [lo, hi] = ranges[figure_id - 1];
    CountSeries series(integer_grid(lo, hi, resolution));
    const auto& grid = series.x();

    switch (figure_id) {
        case 1:
        case 2:
        case 3:
            series.add_column("pi", counts_on_grid(grid, false, ctx));
            break;
        case 4:
            series.add_column("pi", counts_on_grid(grid, false, ctx));
            series.add_column("x_over_log", x_over_log_power(grid, 1));
            break;
        case 5:
            series.add_column("li", li_on_grid(grid, 1, ctx));
            series.add_column("pi", counts_on_grid(grid, false, ctx));
            series.add_column("x_over_log", x_over_log_power(grid, 1));
            break;
        case 6:
        case 7:
        case 8:
            series.add_column("pi2", counts_on_grid(grid, true, ctx));
            break;
        case 9:
            series.add_column("pi2", counts_on_grid(grid, true, ctx));
            series.add_column("li2", li_on_grid(grid, 2, ctx));
            series.add_column("x_over_log2", x_over_log_power(grid, 2));
            break;
        case 10: {
            series.add_column("pi2", counts_on_grid(grid, true, ctx));
            auto scaled = li_on_grid(grid, 2, ctx);
            for (auto& v : scaled) v *= kFigureTwinConstant;
            series.add_column("scaled_li2", std::move(scaled));
            break;
        }
    }
    return series;
}

}  // namespace ptl
