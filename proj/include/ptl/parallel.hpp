#pragma once

#include <cstddef>
#include <functional>

namespace ptl {

/// Runs task(worker, index) once for every index in [0, count) using at most
/// `threads` workers. Indices are claimed dynamically; callers that need a
/// deterministic result store per-index output and reduce it in index order.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(unsigned worker, std::size_t index)>& task);

/// Compensated (Neumaier) summation, used wherever long floating sums are merged.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if ((sum_ >= 0 ? sum_ : -sum_) >= (v >= 0 ? v : -v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace ptl
