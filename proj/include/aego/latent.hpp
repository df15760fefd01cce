#ifndef AEGO_LATENT_HPP
#define AEGO_LATENT_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "aego/bench.hpp"
#include "aego/localopt.hpp"
#include "aego/nn.hpp"

namespace aego::latent {

struct DEConfig {
    int gamma = 0;           // population size (>= 4)
    int generations = 1000;  // G
    double weight_f = 0.6;   // differential weight F
    double chi0 = 0.95;      // crossover probability
    std::uint64_t seed = 0;
    // After this many consecutive generations without a single accepted
    // trial, the next generation re-draws every member except the best one
    // uniformly (the best-ever result is never discarded). 0 disables.
    // Evaluation accounting is unchanged: gamma candidates per generation.
    int restart_stall = 0;
};

/// One candidate evaluation: the selected cost plus the per-n_F-unit cost
/// sequence behind it (length mu+1 for c_mu, length 1 for a plain cost).
struct CandidateEval {
    double cost = 0;
    std::vector<double> unit_costs;
};

using CostFn = std::function<CandidateEval(const Eigen::VectorXd&)>;

/// Invoked once per candidate evaluation, in deterministic (population-index)
/// order regardless of thread count.
using EvalObserver = std::function<void(const std::vector<double>&)>;

struct DEResult {
    Eigen::VectorXd best;
    double best_cost = 0;
    std::vector<double> generation_best;  // best-ever after init and each generation
    long evaluations = 0;                 // candidate evaluations: gamma * (G + 1)
};

/// DE/rand/1/bin over [0,1]^dim: mutant a + F (b - c) from three distinct
/// others, binomial crossover with one forced coordinate, clip to the cube,
/// greedy one-to-one selection. Members are evaluated once at creation and
/// their cost cached.
DEResult differential_evolution(const CostFn& cost, int dim, const DEConfig& cfg,
                                const EvalObserver& observer = {}, int threads = 1);

struct LatentEval {
    double cost = 0;             // c_mu(z)
    Eigen::VectorXd chi;         // chi_mu(z)
    Eigen::VectorXd chi_grad;    // gradient already fetched at chi
    std::vector<double> unit_costs;  // mu+1 entries
};

/// c_mu(z): decode, mu Adam steps from a fresh optimizer state, evaluate.
LatentEval latent_cost(const nn::AutoencoderBundle& bundle, const bench::Problem& problem,
                       const Eigen::VectorXd& z, int mu, const localopt::AdamConfig& cfg);

enum class PostProcessMode { PP1, PP2 };

std::string post_mode_name(PostProcessMode mode);
PostProcessMode parse_post_mode(const std::string& name);

struct PostResult {
    Eigen::VectorXd x;
    double cost = 0;
    std::vector<double> unit_costs;
};

/// PP1 rebuilds chi_mu(z*) with the latent-phase Adam settings, then runs nu
/// steps from fresh Adam moments under post_cfg (mu+1+nu units). PP2 restarts
/// from decode(z*) under post_cfg alone (nu+1 units).
PostResult post_process(const nn::AutoencoderBundle& bundle, const bench::Problem& problem,
                        const Eigen::VectorXd& z_star, int mu, int nu, PostProcessMode mode,
                        const localopt::AdamConfig& latent_cfg,
                        const localopt::AdamConfig& post_cfg);

}  // namespace aego::latent

#endif
