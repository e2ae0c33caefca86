#include "coco/stats.hpp"

#include "coco/errors.hpp"

#include <algorithm>
#include <cmath>

namespace coco {

void RunningStats::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double n = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / n;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
    n_ += other.n_;
}

double RunningStats::variance() const {
    return n_ < 2 ? 0.0 : std::max(m2_, 0.0) / static_cast<double>(n_ - 1);
}

double RunningStats::stdev() const { return std::sqrt(variance()); }

std::vector<HistogramBin> histogram(const std::vector<double>& data, std::size_t bins) {
    if (bins == 0) throw InvalidArgument("histogram needs at least one bin");
    if (data.empty()) return {};
    const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
    const double lo = *lo_it;
    double hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].low = lo + width * static_cast<double>(b);
        out[b].high = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double x : data) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        out[std::min(b, bins - 1)].count++;
    }
    return out;
}

} // namespace coco
