#include "ptl/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ptl/arith.hpp"
#include "ptl/error.hpp"
#include "ptl/parallel.hpp"
#include "ptl/sieve.hpp"

namespace ptl {

namespace {

constexpr int kMaxDepth = 48;
constexpr std::uint64_t kMaxEvaluations = 50'000'000;

class AdaptiveSimpson {
public:
    explicit AdaptiveSimpson(unsigned k) : k_(static_cast<int>(k)) {}

    double f(double t) {
        ++evaluations_;
        return std::pow(std::log(t), -k_);
    }

    double run(double a, double b, double tol) {
        const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return step(a, b, fa, fm, fb, whole, tol, 0);
    }

    double error() const { return error_.value(); }
    std::uint64_t evaluations() const { return evaluations_; }
    bool failed() const { return failed_; }

private:
    double step(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(left + right);
        if (std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= roundoff) {
            error_.add(std::fabs(delta) / 15.0);
            return left + right + delta / 15.0;
        }
        if (depth >= kMaxDepth || evaluations_ > kMaxEvaluations) {
            failed_ = true;
            error_.add(std::fabs(delta) / 15.0);
            return left + right + delta / 15.0;
        }
        return step(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               step(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    int k_;
    std::uint64_t evaluations_ = 0;
    CompensatedSum error_;
    bool failed_ = false;
};

double default_tolerance(double x, unsigned k, const Context& ctx) {
    // The integrand is decreasing, so (x - 2)/(log x)^k under-estimates the integral.
    const double lower = (x - 2.0) / std::pow(std::log(x), static_cast<int>(k));
    return ctx.quad_rel_tol * std::max(1.0, lower);
}

}  // namespace

QuadratureResult integrate_inverse_log_power(double a, double b, unsigned k, double tol) {
    if (k == 0) throw DomainError("integrand exponent k must be >= 1");
    if (!(a >= 2.0) || !(b >= a) || !std::isfinite(b))
        throw DomainError("integration range must satisfy 2 <= a <= b < inf");
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");

    QuadratureResult out;
    if (a == b) return out;

    // Geometric panels (a, 2a, 4a, ...) keep the adaptive refinement well balanced;
    // each panel receives tolerance in proportion to its length.
    AdaptiveSimpson simpson(k);
    CompensatedSum total;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, 2.0 * lo);
        total.add(simpson.run(lo, hi, tol * (hi - lo) / (b - a)));
        lo = hi;
    }
    out.value = total.value();
    out.abs_error_estimate = simpson.error();
    out.evaluations = simpson.evaluations();
    if (simpson.failed() || out.abs_error_estimate > tol)
        throw ConvergenceError("adaptive Simpson did not reach tolerance " + std::to_string(tol));
    return out;
}

QuadratureResult li(double x, double tol, const Context& ctx) { return li_k(x, 1, tol, ctx); }

QuadratureResult li_k(double x, unsigned k, double tol, const Context& ctx) {
    if (!(x >= 2.0)) throw DomainError("li requires x >= 2");
    if (k == 0) throw DomainError("li_k requires k >= 1");
    return integrate_inverse_log_power(2.0, x, k, tol > 0.0 ? tol : default_tolerance(x, k, ctx));
}

double li_asymptotic(double x, unsigned m) {
    if (!(x > 1.0)) throw DomainError("li_asymptotic requires x > 1");
    if (m == 0) throw DomainError("li_asymptotic requires m >= 1");
    const double log_x = std::log(x);
    double term = x / log_x;  // (j-1)! x / (log x)^j at j = 1
    double sum = term;
    for (unsigned j = 2; j <= m; ++j) {
        term *= static_cast<double>(j - 1) / log_x;
        sum += term;
    }
    return sum;
}

double mertens_product(std::uint64_t P, const Context& ctx) {
    if (P < 2) throw DomainError("mertens_product requires P >= 2");
    if (P > ctx.max_x) throw ResourceError("mertens_product: P exceeds configured maximum");
    std::vector<CompensatedSum> partial(segment_count(2, P, ctx.segment_size));
    for_each_segment(2, P, 0, ctx, [&](std::size_t i, const SegmentView& seg) {
        CompensatedSum s;
        seg.for_each_prime(seg.lo(), seg.hi(),
                           [&](std::uint64_t p) { s.add(std::log1p(-1.0 / static_cast<double>(p))); });
        partial[i] = s;
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());
    return std::exp(total.value());
}

Rational mertens_product_exact(std::uint64_t P) {
    if (P < 2) throw DomainError("mertens_product_exact requires P >= 2");
    if (P > 1'000'000) throw ResourceError("mertens_product_exact: P exceeds 10^6");
    Rational product(1);
    for (std::uint32_t p : *base_primes(P)) {
        if (p > P) break;
        product *= Rational(p - 1, p);
    }
    return product;
}

Rational mobius_divisor_sum(std::uint64_t P) {
    if (P < 2) throw DomainError("mobius_divisor_sum requires P >= 2");
    std::vector<i128> primes;
    for (std::uint32_t p : *base_primes(P)) {
        if (p > P) break;
        primes.push_back(p);
        if (primes.size() > 20)
            throw ResourceError("mobius_divisor_sum: primorial has more than 2^20 divisors");
    }

    // Put every term over the primorial D: mu(d)/d = mu(d) (D/d) / D.
    i128 primorial = 1;
    for (auto p : primes) primorial *= p;
    i128 numerator = 0;
    auto walk = [&](auto&& self, std::size_t i, i128 cofactor, int sign) -> void {
        if (i == primes.size()) {
            numerator += sign * cofactor;
            return;
        }
        self(self, i + 1, cofactor, sign);               // p_i does not divide d
        self(self, i + 1, cofactor / primes[i], -sign);  // p_i divides d
    };
    walk(walk, 0, primorial, 1);
    return Rational(numerator, primorial);
}

double mobius_partial_sum(std::uint64_t N, const Context& ctx) {
    if (N > 100'000'000) throw ResourceError("mobius_partial_sum: N exceeds 10^8");
    if (N == 0) return 0.0;
    const std::uint64_t chunk = ctx.segment_size;
    const std::size_t chunks = segment_count(1, N, chunk);
    std::vector<CompensatedSum> partial(chunks);
    std::vector<std::vector<std::int8_t>> buffers(std::max(1u, ctx.threads));
    parallel_for(chunks, ctx.threads, [&](unsigned worker, std::size_t i) {
        const std::uint64_t lo = 1 + i * chunk;
        const std::uint64_t hi = std::min(N, lo + chunk - 1);
        auto& mu = buffers[worker];
        mu.resize(static_cast<std::size_t>(hi - lo + 1));
        mobius_segment(lo, hi, mu);
        CompensatedSum s;
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (const int m = mu[static_cast<std::size_t>(n - lo)]) s.add(m / static_cast<double>(n));
        partial[i] = s;
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());
    return total.value();
}

double harmonic_sum(std::uint64_t N, const Context& ctx) {
    if (N == 0) throw DomainError("harmonic_sum requires N >= 1");
    if (N > ctx.max_x) throw ResourceError("harmonic_sum: N exceeds configured maximum");
    const std::uint64_t chunk = ctx.segment_size;
    const std::size_t chunks = segment_count(1, N, chunk);
    std::vector<CompensatedSum> partial(chunks);
    parallel_for(chunks, ctx.threads, [&](unsigned, std::size_t i) {
        const std::uint64_t lo = 1 + i * chunk;
        const std::uint64_t hi = std::min(N, lo + chunk - 1);
        CompensatedSum s;
        for (std::uint64_t n = hi; n >= lo; --n) s.add(1.0 / static_cast<double>(n));
        partial[i] = s;
    });
    CompensatedSum total;
    for (std::size_t i = chunks; i-- > 0;) total.add(partial[i].value());
    return total.value();
}

double brun_partial_sum(std::uint64_t x, BrunVariant variant, const Context& ctx) {
    if (x > ctx.max_x - 2) throw ResourceError("brun_partial_sum: x exceeds configured maximum");
    if (x < 3) return 0.0;
    std::vector<CompensatedSum> partial(segment_count(2, x, ctx.segment_size));
    for_each_segment(2, x, 2, ctx, [&](std::size_t i, const SegmentView& seg) {
        CompensatedSum s;
        // Walk lower members q of pairs (q, q + 2).
        seg.for_each_prime(seg.lo(), seg.hi(), [&](std::uint64_t q) {
            if (!seg.is_prime(q + 2)) return;
            const double lower = 1.0 / static_cast<double>(q);
            const double upper = 1.0 / static_cast<double>(q + 2);
            if (variant == BrunVariant::Pairs) {
                if (q + 2 <= x) {
                    s.add(lower);
                    s.add(upper);
                }
                return;
            }
            // q was already counted as the upper member of (q - 2, q) when q - 2 is prime.
            const bool seen = q >= seg.lo() + 2 ? seg.is_prime(q - 2) : is_prime(q - 2);
            if (!seen) s.add(lower);
            if (q + 2 <= x) s.add(upper);
        });
        partial[i] = s;
    });
    CompensatedSum total;
    for (const auto& s : partial) total.add(s.value());
    return total.value();
}

EulerProductCheck euler_product_check(double z, std::uint64_t P, std::uint64_t N,
                                      const Context&) {
    if (!(z >= 1.5)) throw DomainError("euler_product_check requires z >= 1.5");
    if (P > 10'000'000 || N > 10'000'000)
        throw ResourceError("euler_product_check: P and N are limited to 10^7");

    EulerProductCheck out;
    CompensatedSum sum;
    for (std::uint64_t n = N; n >= 1; --n) sum.add(std::pow(static_cast<double>(n), -z));
    out.sum_side = sum.value();

    CompensatedSum log_product;
    if (P >= 2) {
        for (std::uint32_t p : *base_primes(P)) {
            if (p > P) break;
            log_product.add(-std::log1p(-std::pow(static_cast<double>(p), -z)));
        }
    }
    out.product_side = std::exp(log_product.value());
    return out;
}

}  // namespace ptl
