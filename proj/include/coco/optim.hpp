#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace coco {

using Vector = std::vector<double>;

/// Open box lower < x < upper; lower == upper pins a coordinate.
struct Box {
    Vector lower;
    Vector upper;

    void validate() const;
    std::size_t dim() const { return lower.size(); }
};

struct AnnealOptions {
    std::uint64_t seed = 1;
    int initial_proposals = 50;
    int levels = 100;
    int proposals_per_level = 200;
    double cooling = 0.95;
    double initial_acceptance = 0.8;
};

struct AnnealResult {
    Vector x;
    double cost = 0.0;
    double initial_temperature = 0.0;
    std::size_t evaluations = 0;
};

/// Metropolis annealing with geometric cooling and box-uniform moves whose half-width shrinks
/// with the cooling factor. Non-finite costs count as +inf. Returns the best point visited;
/// ties go to the lexicographically smaller point.
AnnealResult simulated_annealing(const std::function<double(const Vector&)>& cost, const Box& box,
                                 const AnnealOptions& options = {});

struct LmOptions {
    int max_iterations = 500;
    double rel_step = 1e-6;
    double abs_step = 1e-8;
    double ftol = 1e-12; ///< stop when the relative cost decrease of an accepted step falls below
    double gtol = 1e-10; ///< stop when the gradient's max-norm falls below
    double cost_floor = 1e-32;
    double max_step = std::numeric_limits<double>::infinity(); ///< cap on any single coordinate move
};

struct LmResult {
    Vector x;
    double cost = 0.0; ///< sum of squared residuals
    int iterations = 0;
    bool converged = false;
    std::string stop_reason;
    std::size_t evaluations = 0;
};

/// Levenberg-Marquardt on sum of squared residuals with a forward-difference Jacobian,
/// Marquardt diagonal scaling and Nielsen's damping update. Throws NumericalError when the
/// residuals at x0 are not finite.
LmResult levenberg_marquardt(const std::function<Vector(const Vector&)>& residuals, Vector x0,
                             const LmOptions& options = {});

} // namespace coco
