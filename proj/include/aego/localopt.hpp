#ifndef AEGO_LOCALOPT_HPP
#define AEGO_LOCALOPT_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aego/bench.hpp"

namespace aego::localopt {

struct AdamConfig {
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long t = 0;

    void reset(int dim) {
        m = Eigen::VectorXd::Zero(dim);
        v = Eigen::VectorXd::Zero(dim);
        t = 0;
    }
};

/// One bias-corrected Adam step applied in place. Shared by the local
/// optimizer (vectors) and network training (weight matrices).
template <typename Mat>
void adam_step(Mat& param, const Mat& grad, Mat& m, Mat& v, long t, const AdamConfig& cfg) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    param.array() -= cfg.alpha * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.epsilon);
}

/// Trajectory-continuation handle for LO: holds the iterate, its already
/// fetched cost/gradient, and the Adam moments. Cost and gradient are always
/// fetched together; each fetch is one n_F unit.
struct LocalRun {
    Eigen::VectorXd x;
    double cost = 0;
    Eigen::VectorXd grad;
    AdamState state;
};

/// Fetches (cost, gradient) at x0: one evaluation unit.
LocalRun start_run(const bench::Problem& problem, const Eigen::VectorXd& x0);

/// Advances the run by `steps` Adam iterations (one evaluation unit each),
/// clipping every iterate to the box. Appends the cost of each new iterate to
/// unit_costs when given. Moments are carried, so advance(a) followed by
/// advance(b) equals advance(a+b).
void advance_run(const bench::Problem& problem, LocalRun& run, int steps,
                 const AdamConfig& cfg, std::vector<double>* unit_costs = nullptr);

struct MinimizeResult {
    Eigen::VectorXd x;
    double cost = 0;
    std::vector<double> best_trace;  // running best, one entry per unit (steps+1)
    long eval_count = 0;
};

/// LO^steps from a fresh optimizer state; steps+1 evaluation units.
MinimizeResult adam_minimize(const bench::Problem& problem, const Eigen::VectorXd& x0,
                             int steps, const AdamConfig& cfg);

struct TrainingSet {
    std::string problem_id;
    int n = 0;
    int lambda = 0;
    std::uint64_t seed = 0;
    long eval_count = 0;               // N * (lambda + 1)
    Eigen::MatrixXd samples;           // N x n, the rows of X_lambda
    Eigen::MatrixXd initial;           // N x n, X_0
    Eigen::VectorXd costs;             // cost at each sample of X_lambda
    Eigen::VectorXd lower, upper;      // box copy for downstream normalization
};

/// Multi-start local search: N uniform starts, lambda LO steps each. The
/// per-sample RNG stream is derived from (seed, index), so the result is
/// independent of thread count. unit_costs, when given, receives the
/// N*(lambda+1) per-unit costs in (sample, step) order.
TrainingSet generate_training_set(const bench::Problem& problem, int num_samples, int lambda,
                                  const AdamConfig& cfg, std::uint64_t seed, int threads = 1,
                                  std::vector<double>* unit_costs = nullptr);

}  // namespace aego::localopt

#endif
