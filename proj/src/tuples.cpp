#include "ptl/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptl/analytic.hpp"
#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/parallel.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

ShiftTuple::ShiftTuple(std::vector<std::uint64_t> shifts) : shifts_(std::move(shifts)) {
    if (shifts_.empty()) throw DomainError("shift tuple must be nonempty");
    std::sort(shifts_.begin(), shifts_.end());
    if (std::adjacent_find(shifts_.begin(), shifts_.end()) != shifts_.end())
        throw DomainError("shift tuple has repeated shifts");
}

ShiftTuple ShiftTuple::normalized() const {
    std::vector<std::uint64_t> out(shifts_.begin(), shifts_.end());
    const std::uint64_t base = out.front();
    for (auto& h : out) h -= base;
    return ShiftTuple(std::move(out));
}

namespace {

std::uint64_t residue_count(std::span<const std::uint64_t> shifts, std::uint64_t p) {
    if (p > shifts.back()) return shifts.size();
    std::vector<std::uint64_t> r;
    r.reserve(shifts.size());
    for (auto h : shifts) r.push_back(h % p);
    std::sort(r.begin(), r.end());
    return static_cast<std::uint64_t>(std::unique(r.begin(), r.end()) - r.begin());
}

}  // namespace

std::uint64_t nu_p(const ShiftTuple& shifts, std::uint64_t p) {
    if (!is_prime(p)) throw DomainError("nu_p: " + std::to_string(p) + " is not prime");
    return residue_count(shifts.shifts(), p);
}

std::optional<std::uint64_t> covering_prime(const ShiftTuple& shifts) {
    const auto primes = base_primes(shifts.size());
    for (std::uint32_t p : *primes) {
        if (p > shifts.size()) break;
        if (residue_count(shifts.shifts(), p) == p) return p;
    }
    return std::nullopt;
}

bool is_admissible(const ShiftTuple& shifts) { return !covering_prime(shifts).has_value(); }

SingularSeriesValue singular_series(const ShiftTuple& shifts, std::uint64_t cutoff,
                                    const Context& ctx) {
    const std::uint64_t k = shifts.size();
    if (cutoff < std::max<std::uint64_t>(k, 2))
        throw DomainError("singular_series: cutoff must be at least max(k, 2)");
    if (cutoff > ctx.max_x) throw ResourceError("singular_series: cutoff exceeds configured maximum");

    SingularSeriesValue out;
    out.cutoff = cutoff;
    if (!is_admissible(shifts)) return out;  // a factor vanishes: value is exactly 0

    const double kd = static_cast<double>(k);
    std::vector<CompensatedSum> partial(segment_count(2, cutoff, ctx.segment_size));
    for_each_segment(2, cutoff, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        CompensatedSum s;
        seg.for_each_prime(seg.lo(), seg.hi(), [&](std::uint64_t p) {
            const double pd = static_cast<double>(p);
            const double nu = static_cast<double>(residue_count(shifts.shifts(), p));
            s.add(std::log1p(-nu / pd) - kd * std::log1p(-1.0 / pd));
        });
        partial[i] = s;
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());

    const double P = static_cast<double>(cutoff);
    out.value = std::exp(total.value());
    out.tail_bound = out.value * std::expm1(kd * kd / (P * std::log(P)));
    out.admissible = true;
    return out;
}

double twin_prime_constant(std::uint64_t cutoff, const Context& ctx) {
    if (cutoff < 3) throw DomainError("twin_prime_constant requires cutoff >= 3");
    if (cutoff > ctx.max_x) throw ResourceError("twin_prime_constant: cutoff exceeds configured maximum");

    std::vector<CompensatedSum> partial(segment_count(3, cutoff, ctx.segment_size));
    for_each_segment(3, cutoff, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        CompensatedSum s;
        seg.for_each_prime(seg.lo(), seg.hi(), [&](std::uint64_t p) {
            const double q = static_cast<double>(p - 1);
            s.add(std::log1p(-1.0 / (q * q)));
        });
        partial[i] = s;
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());
    return 2.0 * std::exp(total.value());
}

HlPrediction hl_prediction(double x, const ShiftTuple& shifts, std::uint64_t cutoff,
                           const Context& ctx) {
    HlPrediction out;
    const auto k = static_cast<unsigned>(shifts.size());
    out.li_k = li_k(x, k, ctx.quad_rel_tol * std::max(1.0, x), ctx).value;
    const auto s = singular_series(shifts, cutoff, ctx);
    out.admissible = s.admissible;
    out.singular_series = s.value;
    out.value = s.admissible ? s.value * out.li_k : 0.0;
    return out;
}

namespace {

// Depth-first search in increasing order, so the first hit is lexicographically least.
class NarrowestSearch {
public:
    NarrowestSearch(unsigned k, std::uint64_t diameter) : k_(k), diameter_(diameter) {
        for (std::uint32_t p : *base_primes(k)) {
            if (p > k) break;
            primes_.push_back(p);
            counts_.emplace_back(p, 0);
            covered_.push_back(0);
        }
    }

    std::optional<std::vector<std::uint64_t>> run() {
        if (!push(0)) return std::nullopt;
        if (!push(diameter_)) return std::nullopt;
        if (fill(1)) {
            std::sort(chosen_.begin(), chosen_.end());
            return chosen_;
        }
        return std::nullopt;
    }

private:
    bool push(std::uint64_t v) {
        bool ok = true;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            auto& c = counts_[i][v % primes_[i]];
            if (c++ == 0 && ++covered_[i] == primes_[i]) ok = false;
        }
        chosen_.push_back(v);
        if (!ok) pop();
        return ok;
    }

    void pop() {
        const std::uint64_t v = chosen_.back();
        chosen_.pop_back();
        for (std::size_t i = 0; i < primes_.size(); ++i)
            if (--counts_[i][v % primes_[i]] == 0) --covered_[i];
    }

    bool fill(std::uint64_t start) {
        const std::size_t need = k_ - chosen_.size();
        if (need == 0) return true;
        for (std::uint64_t v = start; v + need <= diameter_; ++v) {
            if (!push(v)) continue;
            if (fill(v + 1)) return true;
            pop();
        }
        return false;
    }

    unsigned k_;
    std::uint64_t diameter_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::vector<unsigned>> counts_;
    std::vector<std::uint64_t> covered_;
    std::vector<std::uint64_t> chosen_;
};

}  // namespace

std::optional<ShiftTuple> narrowest_admissible(unsigned k, std::uint64_t max_diameter) {
    if (k == 0) throw DomainError("narrowest_admissible requires k >= 1");
    if (k > kNarrowestMaxK || max_diameter > kNarrowestMaxDiameter)
        throw ResourceError("narrowest_admissible: search budget is k <= 12, diameter <= 400");
    if (k == 1) return ShiftTuple({0});
    for (std::uint64_t d = k - 1; d <= max_diameter; ++d) {
        if (auto found = NarrowestSearch(k, d).run()) return ShiftTuple(std::move(*found));
    }
    return std::nullopt;
}

}  // namespace ptl
