#ifndef AEGO_IO_HPP
#define AEGO_IO_HPP

#include <string>
#include <vector>

#include "aego/analysis.hpp"
#include "aego/bench.hpp"
#include "aego/localopt.hpp"
#include "aego/nn.hpp"

namespace aego::io {

// All numeric fields are written with 17 significant digits, which round-trips
// IEEE doubles exactly; loading any artifact reproduces results bit-for-bit.

std::string format_double(double v);

void save_c1_instance(const bench::C1Instance& inst, const std::string& path);
bench::C1Instance load_c1_instance(const std::string& path);

void save_training_set(const localopt::TrainingSet& set, const std::string& path);
localopt::TrainingSet load_training_set(const std::string& path);

void save_bundle(const nn::AutoencoderBundle& bundle, std::uint64_t seed,
                 const std::string& metadata, const std::string& path);
struct LoadedBundle {
    nn::AutoencoderBundle bundle;
    std::uint64_t seed = 0;
    std::string metadata;
};
LoadedBundle load_bundle(const std::string& path);

struct TraceRow {
    long n_f = 0;
    double best_cost = 0;
    std::string phase;
};
void save_trace(const std::vector<TraceRow>& rows, const std::string& path);
std::vector<TraceRow> load_trace(const std::string& path);

void save_dim_curves(const std::vector<analysis::DimCurve>& curves, const std::string& path);

struct LatentOutcome {
    Eigen::VectorXd z_star;
    Eigen::VectorXd chi_mu;
    double cost = 0;
    int mu = 0;
    long eval_count = 0;
};
void save_latent_outcome(const LatentOutcome& outcome, const std::string& path);
LatentOutcome load_latent_outcome(const std::string& path);

void save_vector(const Eigen::VectorXd& x, const std::string& path);
Eigen::VectorXd load_vector(const std::string& path);

}  // namespace aego::io

#endif
