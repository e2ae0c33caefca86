#include "coco/optim.hpp"

#include "coco/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace coco {

void Box::validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw InvalidArgument("box bounds must be nonempty and match");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i])
            throw InvalidArgument("infeasible bounds in coordinate " + std::to_string(i));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double c) { return std::isfinite(c) ? c : kInf; }

bool better(double c_a, const Vector& a, double c_b, const Vector& b) {
    if (c_a != c_b) return c_a < c_b;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Keeps a coordinate strictly inside (lo, hi).
double keep_inside(double x, double lo, double hi) {
    if (lo == hi) return lo;
    const double w = hi - lo;
    for (int k = 0; k < 4 && (x <= lo || x >= hi); ++k) x = x <= lo ? 2 * lo - x : 2 * hi - x;
    const double margin = 1e-9 * w;
    return std::clamp(x, lo + margin, hi - margin);
}

} // namespace

AnnealResult simulated_annealing(const std::function<double(const Vector&)>& cost, const Box& box,
                                 const AnnealOptions& options) {
    box.validate();
    const std::size_t n = box.dim();
    AnnealResult out;

    bool collapsed = true;
    for (std::size_t i = 0; i < n; ++i) collapsed = collapsed && box.lower[i] == box.upper[i];
    if (collapsed) {
        out.x = box.lower;
        out.cost = finite_or_inf(cost(out.x));
        out.evaluations = 1;
        return out;
    }

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto eval = [&](const Vector& x) {
        ++out.evaluations;
        return finite_or_inf(cost(x));
    };
    auto uniform_point = [&] {
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = keep_inside(box.lower[i] + unit(rng) * (box.upper[i] - box.lower[i]), box.lower[i], box.upper[i]);
        return x;
    };

    Vector best = uniform_point();
    double best_cost = eval(best);
    std::vector<double> initial_costs{best_cost};
    for (int k = 1; k < options.initial_proposals; ++k) {
        Vector x = uniform_point();
        const double c = eval(x);
        initial_costs.push_back(c);
        if (better(c, x, best_cost, best)) {
            best = std::move(x);
            best_cost = c;
        }
    }

    // T0 such that an average uphill move seen in the initial sample is accepted with the
    // requested probability.
    double uphill = 0.0;
    int n_uphill = 0;
    for (double c : initial_costs)
        if (std::isfinite(c) && std::isfinite(best_cost) && c > best_cost) {
            uphill += c - best_cost;
            ++n_uphill;
        }
    double T0 = n_uphill > 0 ? -(uphill / n_uphill) / std::log(options.initial_acceptance) : 1.0;
    if (!(T0 > 0.0)) T0 = 1.0;
    out.initial_temperature = T0;

    Vector current = best;
    double current_cost = best_cost;
    double temperature = T0;
    double scale = 0.5;
    for (int level = 0; level < options.levels; ++level) {
        for (int k = 0; k < options.proposals_per_level; ++k) {
            Vector x(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = box.upper[i] - box.lower[i];
                x[i] = keep_inside(current[i] + scale * w * (2.0 * unit(rng) - 1.0), box.lower[i], box.upper[i]);
            }
            const double c = eval(x);
            const double u = unit(rng);
            bool accept = c <= current_cost;
            if (!accept && std::isfinite(c)) accept = u < std::exp(-(c - current_cost) / temperature);
            if (accept) {
                current = x;
                current_cost = c;
                if (better(c, x, best_cost, best)) {
                    best = std::move(x);
                    best_cost = c;
                }
            }
        }
        temperature *= options.cooling;
        scale = std::max(scale * options.cooling, 1e-4);
    }
    out.x = std::move(best);
    out.cost = best_cost;
    return out;
}

namespace {

double sum_squares(const Vector& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

bool all_finite(const Vector& r) {
    return std::all_of(r.begin(), r.end(), [](double v) { return std::isfinite(v); });
}

} // namespace

LmResult levenberg_marquardt(const std::function<Vector(const Vector&)>& residuals, Vector x0,
                             const LmOptions& options) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    LmResult out;
    const std::size_t n = x0.size();
    Vector r = residuals(x0);
    ++out.evaluations;
    if (!all_finite(r) || !all_finite(x0)) throw NumericalError("non-finite cost at the starting point");
    const std::size_t m = r.size();
    double cost = sum_squares(r);
    Vector x = std::move(x0);

    double mu = 1e-3;
    double nu = 2.0;
    bool need_jacobian = true;
    MatrixXd J(m, n);
    VectorXd g(n);
    MatrixXd A(n, n);

    auto finish = [&](bool converged, const char* reason) {
        out.x = x;
        out.cost = cost;
        out.converged = converged;
        out.stop_reason = reason;
        return out;
    };

    for (;;) {
        if (cost <= options.cost_floor) return finish(true, "cost at zero");
        if (need_jacobian) {
            for (std::size_t j = 0; j < n; ++j) {
                Vector xh = x;
                const double h = std::max(options.rel_step * std::abs(x[j]), options.abs_step);
                xh[j] += h;
                const Vector rh = residuals(xh);
                ++out.evaluations;
                for (std::size_t i = 0; i < m; ++i) J(i, j) = (rh[i] - r[i]) / h;
            }
            VectorXd rv = Eigen::Map<const VectorXd>(r.data(), static_cast<Eigen::Index>(m));
            g = J.transpose() * rv;
            A = J.transpose() * J;
            need_jacobian = false;
            if (!g.allFinite()) throw NumericalError("non-finite Jacobian");
            if (g.lpNorm<Eigen::Infinity>() < options.gtol) return finish(true, "gradient below tolerance");
        }
        if (out.iterations >= options.max_iterations) return finish(false, "iteration limit");
        ++out.iterations;

        VectorXd d = A.diagonal().cwiseMax(1e-12 * std::max(1.0, A.diagonal().maxCoeff()));
        MatrixXd lhs = A;
        lhs.diagonal() += mu * d;
        VectorXd step = lhs.ldlt().solve(-g);
        if (!step.allFinite()) return finish(true, "singular damped system");
        const double longest = step.lpNorm<Eigen::Infinity>();
        if (longest > options.max_step) step *= options.max_step / longest;

        Vector x_new = x;
        for (std::size_t j = 0; j < n; ++j) x_new[j] += step[static_cast<Eigen::Index>(j)];
        Vector r_new = residuals(x_new);
        ++out.evaluations;
        const double cost_new = all_finite(r_new) ? sum_squares(r_new) : std::numeric_limits<double>::infinity();
        const double predicted = -2.0 * g.dot(step) - step.dot(A * step);
        const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;

        if (rho > 0.0 && cost_new < cost) {
            const double decrease = (cost - cost_new) / cost;
            x = std::move(x_new);
            r = std::move(r_new);
            cost = cost_new;
            need_jacobian = true;
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            if (decrease < options.ftol) return finish(true, "relative cost decrease below tolerance");
        } else {
            mu *= nu;
            nu *= 2.0;
            if (mu > 1e30) return finish(true, "no further decrease possible");
        }
    }
}

} // namespace coco
