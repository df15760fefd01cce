#ifndef AEGO_PIPELINE_HPP
#define AEGO_PIPELINE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aego/analysis.hpp"
#include "aego/bench.hpp"
#include "aego/io.hpp"
#include "aego/latent.hpp"
#include "aego/localopt.hpp"
#include "aego/nn.hpp"

namespace aego::pipeline {

struct AegoConfig {
    bench::ProblemId problem = bench::ProblemId::C1;
    int n = 100;
    int num_samples = 5000;  // N
    int lambda = 100;
    int mu = 5;
    int nu = 1000;
    int m = 5;
    localopt::AdamConfig adam_train;
    localopt::AdamConfig adam_latent;
    localopt::AdamConfig adam_post;
    latent::DEConfig de;  // gamma == 0 selects the 5m default
    nn::TrainConfig train;
    latent::PostProcessMode pp_mode = latent::PostProcessMode::PP1;
    std::uint64_t master_seed = 1;
    std::string output_dir;  // empty = no artifacts written
    int threads = 1;
};

/// Per-problem defaults reproducing the paper's benchmark settings
/// (N=5000, lambda=100, mu=5, nu=1000, DE_{5m,1000,0.6,0.95}, 100x20 training).
AegoConfig default_config(bench::ProblemId id, int n = 100);

/// Cost below which a benchmark run counts as having reached the global
/// optimum basin.
double success_threshold(bench::ProblemId id);

/// Accumulates (n_F, best-so-far) rows across phases; a row is emitted on
/// every strict improvement plus one closing row per phase.
class TraceRecorder {
public:
    void begin_phase(const std::string& phase);
    void record(double cost);
    void record_all(const std::vector<double>& costs);
    /// Advances n_F by evaluations whose individual costs are not available
    /// (replaying a loaded artifact).
    void skip(long units) { n_f_ += units; }
    void end_phase();

    long evaluations() const { return n_f_; }
    double best() const { return best_; }
    const std::vector<io::TraceRow>& rows() const { return rows_; }

private:
    std::vector<io::TraceRow> rows_;
    std::string phase_;
    long n_f_ = 0;
    double best_ = std::numeric_limits<double>::infinity();
};

struct PhaseStats {
    long evaluations = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    double seconds = 0;
};

struct RunReport {
    std::string problem;
    int n = 0;
    int m = 0;
    std::uint64_t master_seed = 0;
    Eigen::VectorXd x_star;
    double final_cost = 0;
    double best_cost = 0;  // lowest cost seen anywhere in the run
    bool success = false;
    double threshold = 0;
    long total_evaluations = 0;
    std::vector<std::pair<std::string, PhaseStats>> phases;  // in execution order
    std::vector<std::pair<std::string, std::string>> artifacts;
    std::vector<double> epoch_losses;
    double final_reconstruction_loss = 0;
    double latent_best_cost = 0;  // best c_mu(z) found by the DE phase
};

void save_report(const RunReport& report, const std::string& path);

/// The four phases of the pipeline in order; phase seeds are pure functions
/// of the master seed. When `shared_set` is given the sampling phase is
/// skipped and its evaluations are replayed into the trace (sweeps share one
/// training set across latent dimensions).
RunReport run_aego(const AegoConfig& cfg, const bench::Problem& problem,
                   io::LoadedBundle* bundle_out = nullptr,
                   std::vector<io::TraceRow>* trace_out = nullptr,
                   const localopt::TrainingSet* shared_set = nullptr,
                   const std::vector<double>* shared_unit_costs = nullptr);

/// Differential evolution straight over the problem box (mapped to the unit
/// cube), with the same trace machinery; phase tag "baseline".
RunReport run_de_baseline(const bench::Problem& problem, const latent::DEConfig& de, int threads = 1,
                          std::vector<io::TraceRow>* trace_out = nullptr,
                          const std::string& output_dir = "");

struct SweepOutcome {
    analysis::DimCurve curve;  // final AE reconstruction loss per m
    std::vector<RunReport> reports;
};

/// Full pipeline for every m in m_list over one shared training set.
SweepOutcome run_sweep(const AegoConfig& cfg, const bench::Problem& problem,
                       const std::vector<int>& m_list);

}  // namespace aego::pipeline

#endif
