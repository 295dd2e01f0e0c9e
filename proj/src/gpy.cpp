#include "ptl/gpy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/parallel.hpp"

namespace ptl {

namespace {

constexpr std::uint64_t kMaxTable = 100'000'000;
constexpr std::uint64_t kChunk = 1u << 16;

// Smallest prime factor of every m <= max_n.
class RangeFactorizer {
public:
    explicit RangeFactorizer(std::uint64_t max_n) {
        if (max_n > kMaxTable)
            throw ResourceError("gpy: factor table up to " + std::to_string(max_n) +
                                " exceeds 10^8");
        spf_.assign(static_cast<std::size_t>(max_n + 1), 0);
        for (std::uint64_t p = 2; p * p <= max_n; ++p) {
            if (spf_[p]) continue;
            for (std::uint64_t m = p * p; m <= max_n; m += p)
                if (!spf_[m]) spf_[m] = static_cast<std::uint32_t>(p);
        }
    }

    std::uint64_t smallest_factor(std::uint64_t m) const { return spf_[m] ? spf_[m] : m; }
    bool is_prime(std::uint64_t m) const { return m >= 2 && spf_[m] == 0; }

    // Appends the distinct primes of m in ascending order.
    void distinct_primes(std::uint64_t m, std::vector<std::uint64_t>& out) const {
        while (m > 1) {
            const std::uint64_t p = smallest_factor(m);
            out.push_back(p);
            while (m % p == 0) m /= p;
        }
    }

    double mangoldt(std::uint64_t m) const {
        if (m < 2) return 0.0;
        const std::uint64_t p = smallest_factor(m);
        while (m % p == 0) m /= p;
        return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }

private:
    std::vector<std::uint32_t> spf_;
};

// Calls fn(mu(d), d) for every squarefree d <= R built from `primes` (ascending, distinct).
template <class Fn>
std::uint64_t for_each_small_squarefree(const std::vector<std::uint64_t>& primes, double R, Fn&& fn) {
    std::uint64_t visited = 0;
    auto walk = [&](auto&& self, std::size_t start, std::uint64_t d, int mu) -> void {
        ++visited;
        fn(mu, d);
        for (std::size_t i = start; i < primes.size(); ++i) {
            const std::uint64_t next = d * primes[i];
            if (static_cast<double>(next) > R) break;
            self(self, i + 1, next, -mu);
        }
    };
    walk(walk, 0, 1, 1);
    return visited;
}

double truncated_mangoldt(const std::vector<std::uint64_t>& primes, double R) {
    const double log_R = std::log(R);
    double sum = 0.0;
    for_each_small_squarefree(primes, R, [&](int mu, std::uint64_t d) {
        sum += mu * (log_R - std::log(static_cast<double>(d)));
    });
    return sum;
}

double sieve_weight(const std::vector<std::uint64_t>& primes, double R, unsigned power,
                    std::uint64_t budget) {
    const double log_R = std::log(R);
    double sum = 0.0;
    const std::uint64_t visited = for_each_small_squarefree(primes, R, [&](int mu, std::uint64_t d) {
        sum += mu * std::pow(log_R - std::log(static_cast<double>(d)), static_cast<int>(power));
    });
    if (visited > budget) throw ResourceError("gpy: divisor enumeration exceeds the divisor budget");
    return sum / std::tgamma(static_cast<double>(power) + 1.0);
}

void merge_primes(std::vector<std::uint64_t>& primes) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
}

void check_params(const GpyParams& p, Approximation approx) {
    if (p.N < 2) throw DomainError("gpy: N must be at least 2");
    if (!(p.R >= 1.0) || !std::isfinite(p.R)) throw DomainError("gpy: R must be at least 1");
    if (approx == Approximation::Sieve && p.ell >= p.shifts.size())
        throw DomainError("gpy: the sieve approximation needs l < k");
}

// Evaluates the chosen approximation w(n) for many n over one shared factor table.
class WeightEvaluator {
public:
    WeightEvaluator(const RangeFactorizer& table, double R, unsigned k, unsigned ell,
                    Approximation approx, const Context& ctx)
        : table_(table), R_(R), power_(k + ell), approx_(approx), budget_(ctx.divisor_budget) {}

    double lambda_R(std::uint64_t m, std::vector<std::uint64_t>& scratch) const {
        scratch.clear();
        table_.distinct_primes(m, scratch);
        return truncated_mangoldt(scratch, R_);
    }

    template <class Shifts>
    double weight(std::uint64_t n, const Shifts& shifts, std::vector<std::uint64_t>& scratch) const {
        if (approx_ == Approximation::Product) {
            double w = 1.0;
            for (auto h : shifts) {
                w *= lambda_R(n + h, scratch);
                if (w == 0.0) break;
            }
            return w;
        }
        scratch.clear();
        for (auto h : shifts) table_.distinct_primes(n + h, scratch);
        merge_primes(scratch);
        return sieve_weight(scratch, R_, power_, budget_);
    }

private:
    const RangeFactorizer& table_;
    double R_;
    unsigned power_;
    Approximation approx_;
    std::uint64_t budget_;
};

struct Ranked {
    double weight;
    std::uint64_t n;
};

bool heavier(const Ranked& a, const Ranked& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.n < b.n;
}

void keep_top(std::vector<Ranked>& top, Ranked item) {
    if (top.size() == kWitnessCount && !heavier(item, top.back())) return;
    top.insert(std::upper_bound(top.begin(), top.end(), item, heavier), item);
    if (top.size() > kWitnessCount) top.pop_back();
}

struct ChunkResult {
    CompensatedSum sum;
    std::vector<Ranked> top;
    Ranked best{0.0, 0};  // largest positive contribution; weight 0 means none
};

// Shared driver for both detection sums. inner(n, scratch) returns the squared
// weight attached to n; outer(n) the prime-detecting factor sum.
template <class Inner, class Outer>
DetectionReport run_detection(std::uint64_t N, unsigned r, const std::vector<std::uint64_t>& shifts,
                              const RangeFactorizer& table, Inner&& inner, Outer&& outer,
                              const Context& ctx) {
    const double threshold = r * std::log(3.0 * static_cast<double>(N));
    const std::uint64_t lo = N + 1, hi = 2 * N;
    const std::size_t chunks = static_cast<std::size_t>((hi - lo) / kChunk + 1);
    std::vector<ChunkResult> results(chunks);
    parallel_for(chunks, ctx.threads, [&](unsigned, std::size_t c) {
        std::vector<std::uint64_t> scratch;
        auto& res = results[c];
        const std::uint64_t a = lo + c * kChunk;
        const std::uint64_t b = std::min(hi, a + kChunk - 1);
        for (std::uint64_t n = a; n <= b; ++n) {
            const double w2 = inner(n, scratch);
            const double term = (outer(n) - threshold) * w2;
            res.sum.add(term);
            if (w2 > 0.0) keep_top(res.top, {w2, n});
            if (term > res.best.weight) res.best = {term, n};
        }
    });

    DetectionReport report;
    CompensatedSum total;
    std::vector<Ranked> top;
    Ranked best{0.0, 0};
    for (const auto& res : results) {
        total.add(res.sum.value());
        for (const auto& item : res.top) keep_top(top, item);
        if (res.best.weight > best.weight) best = res.best;
    }
    report.sum_value = total.value();
    report.positive = report.sum_value > 0.0;

    auto describe = [&](std::uint64_t n, double weight) {
        Witness w;
        w.n = n;
        w.weight = weight;
        for (auto h : shifts) {
            const std::uint64_t m = n + h;
            if (table.is_prime(m))
                w.prime_shifts.push_back(h);
            else if (table.mangoldt(m) > 0.0)
                w.prime_power_shifts.push_back(h);
        }
        return w;
    };
    for (const auto& item : top) report.witnesses.push_back(describe(item.n, item.weight));
    if (report.positive && best.weight > 0.0) {
        auto it = std::find_if(report.witnesses.begin(), report.witnesses.end(),
                               [&](const Witness& w) { return w.n == best.n; });
        if (it == report.witnesses.end()) {
            std::vector<std::uint64_t> scratch;
            report.witnesses.push_back(describe(best.n, inner(best.n, scratch)));
            it = report.witnesses.end() - 1;
        }
        it->certificate = true;
    }
    return report;
}

std::optional<double> normalize(double value, std::uint64_t N, double R, unsigned exponent) {
    const double log_R = std::log(R);
    if (!(log_R > 0.0)) return std::nullopt;
    return value / (static_cast<double>(N) * std::pow(log_R, static_cast<int>(exponent)));
}

}  // namespace

double default_truncation(std::uint64_t N, unsigned k) {
    if (k == 0) throw DomainError("default_truncation requires k >= 1");
    const double R = std::floor(std::pow(static_cast<double>(N), 1.0 / (4.0 * k)) + 1e-12);
    return std::max(1.0, R);
}

i128 tuple_polynomial(std::uint64_t n, const ShiftTuple& shifts) {
    i128 product = 1;
    for (auto h : shifts.shifts()) {
        const i128 factor = static_cast<i128>(n) + static_cast<i128>(h);
        if (__builtin_mul_overflow(product, factor, &product))
            throw OverflowError("tuple_polynomial: product exceeds 128 bits");
    }
    return product;
}

double lambda_R(std::uint64_t n, double R) {
    if (n == 0) throw DomainError("lambda_R requires n >= 1");
    if (!(R >= 1.0)) throw DomainError("lambda_R requires R >= 1");
    std::vector<std::uint64_t> primes;
    for (const auto& pp : factorize(n).factors) primes.push_back(pp.prime);
    return truncated_mangoldt(primes, R);
}

double lambda_R_product(std::uint64_t n, const ShiftTuple& shifts, double R) {
    double product = 1.0;
    for (auto h : shifts.shifts()) product *= lambda_R(n + h, R);
    return product;
}

double lambda_R_sieve(std::uint64_t n, const ShiftTuple& shifts, unsigned ell, double R,
                      const Context& ctx) {
    if (n == 0) throw DomainError("lambda_R_sieve requires n >= 1");
    if (!(R >= 1.0)) throw DomainError("lambda_R_sieve requires R >= 1");
    (void)tuple_polynomial(n, shifts);  // the polynomial itself must be representable
    std::vector<std::uint64_t> primes;
    for (auto h : shifts.shifts())
        for (const auto& pp : factorize(n + h).factors) primes.push_back(pp.prime);
    merge_primes(primes);
    return sieve_weight(primes, R, static_cast<unsigned>(shifts.size()) + ell, ctx.divisor_budget);
}

namespace {

template <class Weight>
double moment_sum(std::uint64_t N, const Context& ctx, Weight&& weight) {
    const std::size_t chunks = static_cast<std::size_t>((N - 1) / kChunk + 1);
    std::vector<CompensatedSum> partial(chunks);
    parallel_for(chunks, ctx.threads, [&](unsigned, std::size_t c) {
        std::vector<std::uint64_t> scratch;
        const std::uint64_t a = 1 + c * kChunk;
        const std::uint64_t b = std::min(N, a + kChunk - 1);
        for (std::uint64_t n = a; n <= b; ++n) partial[c].add(weight(n, scratch));
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());
    return total.value();
}

void check_work(std::uint64_t N, std::uint64_t per_n, const Context& ctx) {
    if (per_n != 0 && N > ctx.work_budget / per_n)
        throw ResourceError("gpy: N * evaluations per n exceeds the work budget");
}

}  // namespace

double first_moment(const GpyParams& params, Approximation approx, const Context& ctx) {
    check_params(params, approx);
    const auto k = static_cast<unsigned>(params.shifts.size());
    check_work(params.N, k, ctx);
    const RangeFactorizer table(params.N + params.shifts.max());
    const WeightEvaluator eval(table, params.R, k, params.ell, approx, ctx);
    const auto shifts = params.shifts.shifts();
    return moment_sum(params.N, ctx, [&](std::uint64_t n, std::vector<std::uint64_t>& scratch) {
        const double w = eval.weight(n, shifts, scratch);
        return w * w;
    });
}

double second_moment(const GpyParams& params, std::uint64_t h0, Approximation approx,
                     const Context& ctx) {
    check_params(params, approx);
    const auto k = static_cast<unsigned>(params.shifts.size());
    check_work(params.N, k + 1, ctx);
    const RangeFactorizer table(params.N + std::max(params.shifts.max(), h0));
    const WeightEvaluator eval(table, params.R, k, params.ell, approx, ctx);
    const auto shifts = params.shifts.shifts();
    return moment_sum(params.N, ctx, [&](std::uint64_t n, std::vector<std::uint64_t>& scratch) {
        const double lambda = table.mangoldt(n + h0);
        if (lambda == 0.0) return 0.0;
        const double w = eval.weight(n, shifts, scratch);
        return lambda * w * w;
    });
}

DetectionReport detection_sum(const GpyParams& params, Approximation approx, const Context& ctx) {
    check_params(params, approx);
    if (params.r == 0) throw DomainError("detection_sum requires r >= 1");
    if (params.shifts.max() >= params.N)
        throw DomainError("detection_sum requires every shift below N");
    const auto k = static_cast<unsigned>(params.shifts.size());
    check_work(params.N, 2 * k, ctx);

    const RangeFactorizer table(2 * params.N + params.shifts.max());
    const WeightEvaluator eval(table, params.R, k, params.ell, approx, ctx);
    const std::vector<std::uint64_t> shifts(params.shifts.shifts().begin(),
                                            params.shifts.shifts().end());
    auto report = run_detection(
        params.N, params.r, shifts, table,
        [&](std::uint64_t n, std::vector<std::uint64_t>& scratch) {
            const double w = eval.weight(n, shifts, scratch);
            return w * w;
        },
        [&](std::uint64_t n) {
            double s = 0.0;
            for (auto h : shifts) s += table.mangoldt(n + h);
            return s;
        },
        ctx);
    report.params = params;
    report.k = k;
    const unsigned ell = approx == Approximation::Sieve ? params.ell : 0;
    report.normalized = normalize(report.sum_value, params.N, params.R, 2 * k + 2 * ell + 1);
    return report;
}

DetectionReport detection_sum_interval(std::uint64_t N, std::uint64_t h, unsigned k, unsigned ell,
                                       double R, unsigned r, Approximation approx,
                                       const Context& ctx) {
    if (k == 0) throw DomainError("detection_sum_interval requires k >= 1");
    if (h < k) throw DomainError("detection_sum_interval requires h >= k");
    if (h >= N) throw DomainError("detection_sum_interval requires h < N");
    if (r == 0) throw DomainError("detection_sum_interval requires r >= 1");

    // Enumerate the k-subsets of {1..h}, refusing once the budget is passed.
    std::vector<std::vector<std::uint64_t>> subsets;
    std::vector<std::uint64_t> current;
    auto choose = [&](auto&& self, std::uint64_t start) -> void {
        if (current.size() == k) {
            if (subsets.size() == kSubsetBudget)
                throw ResourceError("detection_sum_interval: more than 10^5 subsets");
            subsets.push_back(current);
            return;
        }
        for (std::uint64_t v = start; v + (k - current.size()) <= h + 1; ++v) {
            current.push_back(v);
            self(self, v + 1);
            current.pop_back();
        }
    };
    choose(choose, 1);

    std::vector<std::uint64_t> interval(h);
    for (std::uint64_t j = 0; j < h; ++j) interval[j] = j + 1;
    GpyParams params;
    params.N = N;
    params.shifts = ShiftTuple(interval);
    params.ell = ell;
    params.R = R;
    params.r = r;
    check_params(params, Approximation::Product);
    if (approx == Approximation::Sieve && ell >= k)
        throw DomainError("gpy: the sieve approximation needs l < k");
    check_work(N, subsets.size() * k + h, ctx);

    const RangeFactorizer table(2 * N + h);
    const WeightEvaluator eval(table, R, k, ell, approx, ctx);
    auto report = run_detection(
        N, r, interval, table,
        [&](std::uint64_t n, std::vector<std::uint64_t>& scratch) {
            double total = 0.0;
            for (const auto& subset : subsets) {
                const double w = eval.weight(n, subset, scratch);
                total += w * w;
            }
            return total;
        },
        [&](std::uint64_t n) {
            double s = 0.0;
            for (std::uint64_t j = 1; j <= h; ++j) s += table.mangoldt(n + j);
            return s;
        },
        ctx);
    report.params = params;
    report.k = k;
    report.interval = true;
    const unsigned eff_ell = approx == Approximation::Sieve ? ell : 0;
    report.normalized = normalize(report.sum_value, N, R, 2 * k + 2 * eff_ell + 1);
    return report;
}

}  // namespace ptl
