#include "aego/localopt.hpp"

#include <cmath>
#include <stdexcept>

#include "aego/parallel.hpp"
#include "aego/rng.hpp"

namespace aego::localopt {

namespace {

void check_gradient(const Eigen::VectorXd& grad) {
    for (int i = 0; i < grad.size(); ++i) {
        if (std::isnan(grad(i)))
            throw std::runtime_error("adam: NaN gradient at coordinate " + std::to_string(i));
    }
}

}  // namespace

LocalRun start_run(const bench::Problem& problem, const Eigen::VectorXd& x0) {
    LocalRun run;
    run.x = x0;
    run.cost = problem.value_and_gradient(run.x, run.grad);
    check_gradient(run.grad);
    run.state.reset(static_cast<int>(x0.size()));
    return run;
}

void advance_run(const bench::Problem& problem, LocalRun& run, int steps,
                 const AdamConfig& cfg, std::vector<double>* unit_costs) {
    for (int k = 0; k < steps; ++k) {
        run.state.t += 1;
        adam_step(run.x, run.grad, run.state.m, run.state.v, run.state.t, cfg);
        run.x = problem.clip(std::move(run.x));
        run.cost = problem.value_and_gradient(run.x, run.grad);
        check_gradient(run.grad);
        if (unit_costs) unit_costs->push_back(run.cost);
    }
}

MinimizeResult adam_minimize(const bench::Problem& problem, const Eigen::VectorXd& x0,
                             int steps, const AdamConfig& cfg) {
    LocalRun run = start_run(problem, x0);
    MinimizeResult result;
    result.best_trace.reserve(steps + 1);
    result.best_trace.push_back(run.cost);

    std::vector<double> costs;
    costs.reserve(steps);
    advance_run(problem, run, steps, cfg, &costs);
    for (double c : costs) result.best_trace.push_back(std::min(result.best_trace.back(), c));

    result.x = std::move(run.x);
    result.cost = run.cost;
    result.eval_count = steps + 1;
    return result;
}

TrainingSet generate_training_set(const bench::Problem& problem, int num_samples, int lambda,
                                  const AdamConfig& cfg, std::uint64_t seed, int threads,
                                  std::vector<double>* unit_costs) {
    if (num_samples < 1) throw std::invalid_argument("generate_training_set: N must be >= 1");
    const int n = problem.n;

    TrainingSet set;
    set.problem_id = bench::problem_name(problem.id);
    set.n = n;
    set.lambda = lambda;
    set.seed = seed;
    set.samples.resize(num_samples, n);
    set.initial.resize(num_samples, n);
    set.costs.resize(num_samples);
    set.lower = problem.lower;
    set.upper = problem.upper;
    set.eval_count = static_cast<long>(num_samples) * (lambda + 1);

    std::vector<std::vector<double>> per_sample;
    if (unit_costs) per_sample.resize(num_samples);

    parallel_for(num_samples, threads, [&](int i) {
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        Eigen::VectorXd x0(n);
        for (int j = 0; j < n; ++j) x0(j) = rng.uniform(problem.lower(j), problem.upper(j));
        set.initial.row(i) = x0.transpose();

        LocalRun run = start_run(problem, x0);
        std::vector<double>* sink = unit_costs ? &per_sample[i] : nullptr;
        if (sink) {
            sink->reserve(lambda + 1);
            sink->push_back(run.cost);
        }
        advance_run(problem, run, lambda, cfg, sink);
        set.samples.row(i) = run.x.transpose();
        set.costs(i) = run.cost;
    });

    if (unit_costs) {
        unit_costs->reserve(unit_costs->size() + set.eval_count);
        for (auto& trace : per_sample)
            unit_costs->insert(unit_costs->end(), trace.begin(), trace.end());
    }
    return set;
}

}  // namespace aego::localopt
