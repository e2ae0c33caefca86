#pragma once

#include <cstddef>
#include <vector>

namespace coco {

/// Welford accumulator with an order-sensitive merge (callers merge in a fixed order).
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Sample variance (n - 1 denominator); 0 when fewer than two values.
    double variance() const;
    double stdev() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

/// Equal-width bins spanning [min, max] of the data; the maximum falls in the last bin.
std::vector<HistogramBin> histogram(const std::vector<double>& data, std::size_t bins = 50);

} // namespace coco
