#ifndef NAIMARK_BOUNDS_OPTIMIZE_HPP
#define NAIMARK_BOUNDS_OPTIMIZE_HPP

#include "naimark_bounds/naimark.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace naimark_bounds {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 2000;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    /// Softmax temperatures for annealed smoothing of the minimax objective;
    /// strictly increasing, final certification is always done with the
    /// exact max.
    std::vector<double> smoothing_schedule = {10.0, 50.0, 250.0, 1250.0};

    void validate() const {
        if (restarts < 1)
            throw std::invalid_argument("OptimizerConfig: restarts must be positive");
        if (max_iters < 1)
            throw std::invalid_argument("OptimizerConfig: max_iters must be positive");
        if (!(tol > 0.0))
            throw std::invalid_argument("OptimizerConfig: tol must be positive");
        for (std::size_t i = 0; i < smoothing_schedule.size(); ++i) {
            if (!(smoothing_schedule[i] > 0.0))
                throw std::invalid_argument(
                    "OptimizerConfig: smoothing temperatures must be positive");
            if (i > 0 && smoothing_schedule[i] <= smoothing_schedule[i - 1])
                throw std::invalid_argument(
                    "OptimizerConfig: smoothing schedule must be increasing");
        }
    }
};

struct OptResult {
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    long long evaluations = 0;
    bool converged = false;
};

namespace detail {

struct PatternSearchOutcome {
    double value = 0.0;
    long long evaluations = 0;
    bool reached_tol = false;
};

/// Coordinate-wise compass search with adaptive step: probe +/- step on each
/// coordinate, keep any strict improvement, halve the step after a round
/// with no improvement. Stops when the step drops below tolerance.
template <typename F>
PatternSearchOutcome pattern_search(F&& objective, std::vector<double>& x,
                                    double initial_step, double tolerance,
                                    int max_iters) {
    PatternSearchOutcome out;
    double fx = objective(x);
    out.evaluations = 1;
    double step = initial_step;
    for (int iter = 0; iter < max_iters; ++iter) {
        if (step < tolerance) {
            out.reached_tol = true;
            break;
        }
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double original = x[i];
            for (double sign : {1.0, -1.0}) {
                x[i] = original + sign * step;
                const double fy = objective(x);
                ++out.evaluations;
                if (fy < fx) {
                    fx = fy;
                    improved = true;
                    break;
                }
                x[i] = original;
            }
        }
        if (!improved) step *= 0.5;
    }
    if (step < tolerance) out.reached_tol = true;
    out.value = fx;
    return out;
}

}  // namespace detail

/// Hermitian dim x dim matrix from dim^2 real parameters: the diagonal
/// first, then (re, im) pairs for the upper triangle in row-major order.
inline CMatrix hermitian_from_params(int dim, const std::vector<double>& params) {
    if (static_cast<int>(params.size()) != dim * dim)
        throw std::invalid_argument("hermitian_from_params: expected dim^2 parameters");
    CMatrix h = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) h(i, i) = params[i];
    std::size_t idx = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const Complex v(params[idx], params[idx + 1]);
            idx += 2;
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    return h;
}

/// W = exp(iH) with H built from the parameter vector; the map is onto the
/// unitary group, so the search space is unconstrained real coordinates.
inline AncillaUnitary ancilla_unitary_from_params(int dim,
                                                  const std::vector<double>& params) {
    if (dim == 0) {
        if (!params.empty())
            throw std::invalid_argument("ancilla_unitary_from_params: expected no parameters");
        return AncillaUnitary::identity(0);
    }
    return AncillaUnitary(exp_i_hermitian(hermitian_from_params(dim, params)));
}

/// Largest magnitude in the overlap matrix of two extensions under W.
inline double exact_max_overlap(const NaimarkExtension& ext_m,
                                const NaimarkExtension& ext_n,
                                const AncillaUnitary& w) {
    return max_abs(overlap_matrix(ext_m, ext_n, w));
}

/// Minimizes max_kl |<m~_k|(I (+) W)|n~_l>| over the ancilla unitary W,
/// parameterized as exp(iH) with ancilla_dim^2 real parameters. Each restart
/// either runs annealed log-sum-exp descent (smoothed max at increasing
/// temperatures, then the exact max) or pure random sampling; the identity
/// is always an incumbent, so the result never exceeds the value at W = I.
/// The reported best_value is the exact objective at best_params.
inline OptResult minimize_max_overlap(const NaimarkExtension& ext_m,
                                      const NaimarkExtension& ext_n,
                                      const OptimizerConfig& cfg) {
    cfg.validate();
    if (ext_m.total_dim() != ext_n.total_dim() ||
        ext_m.system_dim() != ext_n.system_dim())
        throw std::invalid_argument("minimize_max_overlap: extension size mismatch");

    const int ancilla = ext_m.ancilla_dim();
    if (ancilla == 0) {
        OptResult result;
        result.best_value =
            exact_max_overlap(ext_m, ext_n, AncillaUnitary::identity(0));
        result.evaluations = 1;
        result.converged = true;
        return result;
    }

    const int n_params = ancilla * ancilla;
    long long evaluations = 0;

    const auto exact = [&](const std::vector<double>& x) {
        return exact_max_overlap(ext_m, ext_n,
                                 ancilla_unitary_from_params(ancilla, x));
    };
    const auto smoothed = [&](const std::vector<double>& x, double temperature) {
        const CMatrix overlap = overlap_matrix(
            ext_m, ext_n, ancilla_unitary_from_params(ancilla, x));
        const double peak = max_abs(overlap);
        double sum = 0.0;
        for (Eigen::Index c = 0; c < overlap.cols(); ++c)
            for (Eigen::Index r = 0; r < overlap.rows(); ++r)
                sum += std::exp(temperature * (std::abs(overlap(r, c)) - peak));
        return peak + std::log(sum) / temperature;
    };

    constexpr double pi = std::numbers::pi;
    std::vector<double> best_x(n_params, 0.0);
    double best_f = exact(best_x);  // identity incumbent
    ++evaluations;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        GaussianRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
        std::vector<double> x(n_params, 0.0);
        if (restart != 0)
            for (double& v : x) v = rng.uniform(-pi, pi);

        double fx;
        if (restart % 4 == 3) {
            // Pure random-search restart.
            fx = exact(x);
            ++evaluations;
            std::vector<double> y(n_params);
            for (int sample = 0; sample < 64; ++sample) {
                for (double& v : y) v = rng.uniform(-pi, pi);
                const double fy = exact(y);
                ++evaluations;
                if (fy < fx) {
                    fx = fy;
                    x = y;
                }
            }
        } else {
            for (double temperature : cfg.smoothing_schedule) {
                const auto stage = [&](const std::vector<double>& p) {
                    return smoothed(p, temperature);
                };
                evaluations += detail::pattern_search(stage, x, 0.5, cfg.tol,
                                                      cfg.max_iters)
                                   .evaluations;
            }
            const auto outcome =
                detail::pattern_search(exact, x, 0.25, cfg.tol, cfg.max_iters);
            evaluations += outcome.evaluations;
            fx = outcome.value;
        }
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }

    const auto polish =
        detail::pattern_search(exact, best_x, 0.05, cfg.tol, cfg.max_iters);
    evaluations += polish.evaluations;

    OptResult result;
    result.best_params = std::move(best_x);
    result.best_value = exact(result.best_params);
    ++evaluations;
    result.evaluations = evaluations;
    result.converged = polish.reached_tol;
    return result;
}

/// Rebuilds the unit state encoded by 2d search parameters (real parts, then
/// imaginary parts).
inline PureState state_from_params(int dim, const std::vector<double>& params) {
    if (static_cast<int>(params.size()) != 2 * dim)
        throw std::invalid_argument("state_from_params: expected 2*dim parameters");
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(params[i], params[dim + i]);
    return PureState::normalized(v);
}

/// Minimizes the summed Shannon entropy of one or two POVMs over pure
/// states. States are parameterized by 2d reals with normalization inside
/// the objective; the first d restarts start at the canonical basis states
/// (frequent minimizers), the rest at random Gaussian vectors.
inline OptResult minimize_entropy_over_states(
    const std::vector<const Rank1Povm*>& povms, const OptimizerConfig& cfg) {
    cfg.validate();
    if (povms.empty())
        throw std::invalid_argument("minimize_entropy_over_states: no POVMs given");
    const int d = povms.front()->dim();
    double penalty = 1.0;
    for (const Rank1Povm* p : povms) {
        if (p->dim() != d)
            throw std::invalid_argument("minimize_entropy_over_states: dimension mismatch");
        penalty += std::log2(static_cast<double>(p->outcomes()));
    }

    const int n_params = 2 * d;
    long long evaluations = 0;

    const auto entropy_sum = [&](const std::vector<double>& x) {
        CVector v(d);
        for (int i = 0; i < d; ++i) v(i) = Complex(x[i], x[d + i]);
        const double norm = v.norm();
        if (norm < 1e-9) return penalty;  // off the sphere, never optimal
        v /= norm;
        double h = 0.0;
        for (const Rank1Povm* p : povms)
            for (const CVector& ket : p->kets()) {
                const double prob = std::min(std::norm(ket.dot(v)), 1.0);
                if (prob > 0.0) h -= prob * std::log2(prob);
            }
        return h;
    };

    std::vector<double> best_x(n_params, 0.0);
    best_x[0] = 1.0;
    double best_f = entropy_sum(best_x);
    ++evaluations;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        GaussianRng rng(derive_seed(cfg.seed, 0xE47u + restart));
        std::vector<double> x(n_params, 0.0);
        if (restart < d)
            x[restart] = 1.0;
        else
            for (double& v : x) v = rng.next();

        const auto outcome =
            detail::pattern_search(entropy_sum, x, 0.5, cfg.tol, cfg.max_iters);
        evaluations += outcome.evaluations;
        if (outcome.value < best_f) {
            best_f = outcome.value;
            best_x = x;
        }
    }

    const auto polish =
        detail::pattern_search(entropy_sum, best_x, 0.05, cfg.tol, cfg.max_iters);
    evaluations += polish.evaluations;

    OptResult result;
    result.best_params = std::move(best_x);
    result.best_value = entropy_sum(result.best_params);
    ++evaluations;
    result.evaluations = evaluations;
    result.converged = polish.reached_tol;
    return result;
}

inline OptResult minimize_entropy_over_states(const Rank1Povm& m,
                                              const OptimizerConfig& cfg) {
    return minimize_entropy_over_states(std::vector<const Rank1Povm*>{&m}, cfg);
}

inline OptResult minimize_entropy_over_states(const Rank1Povm& m,
                                              const Rank1Povm& n,
                                              const OptimizerConfig& cfg) {
    return minimize_entropy_over_states(std::vector<const Rank1Povm*>{&m, &n}, cfg);
}

/// Exhaustive evaluation of a phase objective on a uniform grid over
/// [0, 2pi). Exact oracle for the ancilla_dim = 1 minimax problems.
template <typename F>
OptResult grid_search_phase(F&& objective, int points) {
    if (points < 2)
        throw std::invalid_argument("grid_search_phase: need at least 2 points");
    OptResult result;
    for (int j = 0; j < points; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / points;
        const double value = objective(theta);
        if (value < result.best_value) {
            result.best_value = value;
            result.best_params = {theta};
        }
    }
    result.evaluations = points;
    result.converged = true;
    return result;
}

}  // namespace naimark_bounds

#endif  // NAIMARK_BOUNDS_OPTIMIZE_HPP
