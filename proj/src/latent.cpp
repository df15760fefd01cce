#include "aego/latent.hpp"

#include <stdexcept>

#include "aego/parallel.hpp"
#include "aego/rng.hpp"

namespace aego::latent {

DEResult differential_evolution(const CostFn& cost, int dim, const DEConfig& cfg,
                                const EvalObserver& observer, int threads) {
    if (dim < 1) throw std::invalid_argument("differential_evolution: dim must be >= 1");
    if (cfg.gamma < 4) throw std::invalid_argument("differential_evolution: population must be >= 4");
    if (!(cfg.weight_f > 0)) throw std::invalid_argument("differential_evolution: F must be positive");
    if (cfg.chi0 < 0 || cfg.chi0 > 1)
        throw std::invalid_argument("differential_evolution: chi0 must be in [0,1]");

    const int np = cfg.gamma;
    RngStream rng(derive_seed(cfg.seed, "de"));

    std::vector<Eigen::VectorXd> population(np);
    std::vector<double> fitness(np);
    std::vector<Eigen::VectorXd> trials(np);
    std::vector<CandidateEval> evals(np);

    DEResult result;
    result.evaluations = 0;

    auto evaluate_batch = [&](const std::vector<Eigen::VectorXd>& points) {
        parallel_for(np, threads, [&](int i) { evals[i] = cost(points[i]); });
        result.evaluations += np;
        if (observer)
            for (int i = 0; i < np; ++i) observer(evals[i].unit_costs);
    };

    for (int i = 0; i < np; ++i) {
        population[i].resize(dim);
        for (int j = 0; j < dim; ++j) population[i](j) = rng.uniform();
    }
    evaluate_batch(population);
    int best_idx = 0;
    for (int i = 0; i < np; ++i) {
        fitness[i] = evals[i].cost;
        if (fitness[i] < fitness[best_idx]) best_idx = i;
    }
    result.best = population[best_idx];
    result.best_cost = fitness[best_idx];
    result.generation_best.push_back(result.best_cost);

    int stall = 0;
    for (int gen = 0; gen < cfg.generations; ++gen) {
        const bool restart = cfg.restart_stall > 0 && stall >= cfg.restart_stall;
        int keep = 0;
        for (int i = 0; i < np; ++i)
            if (fitness[i] < fitness[keep]) keep = i;

        // All random choices are drawn serially before the (possibly
        // parallel) evaluations, keeping runs thread-count independent.
        for (int i = 0; i < np; ++i) {
            if (restart && i != keep) {
                trials[i].resize(dim);
                for (int j = 0; j < dim; ++j) trials[i](j) = rng.uniform();
                continue;
            }
            int r1, r2, r3;
            do { r1 = static_cast<int>(rng.integer(np)); } while (r1 == i);
            do { r2 = static_cast<int>(rng.integer(np)); } while (r2 == i || r2 == r1);
            do { r3 = static_cast<int>(rng.integer(np)); } while (r3 == i || r3 == r1 || r3 == r2);
            const int forced = static_cast<int>(rng.integer(dim));

            Eigen::VectorXd trial = population[i];
            for (int j = 0; j < dim; ++j) {
                const bool cross = rng.uniform() < cfg.chi0;
                if (cross || j == forced)
                    trial(j) = population[r1](j) +
                               cfg.weight_f * (population[r2](j) - population[r3](j));
            }
            trials[i] = trial.cwiseMax(0.0).cwiseMin(1.0);
        }

        evaluate_batch(trials);
        bool accepted = false;
        for (int i = 0; i < np; ++i) {
            const bool fresh = restart && i != keep;
            if (fresh || evals[i].cost < fitness[i]) {
                if (evals[i].cost < fitness[i]) accepted = true;
                fitness[i] = evals[i].cost;
                population[i] = trials[i];
            }
            if (fitness[i] < result.best_cost) {
                result.best_cost = fitness[i];
                result.best = population[i];
            }
        }
        stall = (restart || accepted) ? 0 : stall + 1;
        result.generation_best.push_back(result.best_cost);
    }
    return result;
}

LatentEval latent_cost(const nn::AutoencoderBundle& bundle, const bench::Problem& problem,
                       const Eigen::VectorXd& z, int mu, const localopt::AdamConfig& cfg) {
    LatentEval eval;
    localopt::LocalRun run = localopt::start_run(problem, nn::decode(bundle, z));
    eval.unit_costs.reserve(mu + 1);
    eval.unit_costs.push_back(run.cost);
    localopt::advance_run(problem, run, mu, cfg, &eval.unit_costs);
    eval.cost = run.cost;
    eval.chi = std::move(run.x);
    eval.chi_grad = std::move(run.grad);
    return eval;
}

std::string post_mode_name(PostProcessMode mode) {
    return mode == PostProcessMode::PP1 ? "pp1" : "pp2";
}

PostProcessMode parse_post_mode(const std::string& name) {
    if (name == "pp1" || name == "PP1") return PostProcessMode::PP1;
    if (name == "pp2" || name == "PP2") return PostProcessMode::PP2;
    throw std::invalid_argument("unknown post-processing mode: " + name);
}

PostResult post_process(const nn::AutoencoderBundle& bundle, const bench::Problem& problem,
                        const Eigen::VectorXd& z_star, int mu, int nu, PostProcessMode mode,
                        const localopt::AdamConfig& latent_cfg,
                        const localopt::AdamConfig& post_cfg) {
    PostResult result;
    localopt::LocalRun run = localopt::start_run(problem, nn::decode(bundle, z_star));
    result.unit_costs.push_back(run.cost);
    if (mode == PostProcessMode::PP1) {
        localopt::advance_run(problem, run, mu, latent_cfg, &result.unit_costs);
        run.state.reset(static_cast<int>(run.x.size()));  // fresh moments at chi_mu(z*)
    }
    localopt::advance_run(problem, run, nu, post_cfg, &result.unit_costs);
    result.x = std::move(run.x);
    result.cost = run.cost;
    return result;
}

}  // namespace aego::latent
