#include "aego/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "aego/rng.hpp"

namespace aego::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point from) {
    return std::chrono::duration<double>(Clock::now() - from).count();
}

localopt::AdamConfig table_train(bench::ProblemId id) {
    switch (id) {
        case bench::ProblemId::C1: return {0.02, 0.5, 0.75, 1e-8};
        case bench::ProblemId::C2: return {20.0, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C3: return {3.0, 0.5, 0.75, 1e-8};
        case bench::ProblemId::C4: return {30.0, 0.9, 0.999, 1e-8};
    }
    return {};
}

localopt::AdamConfig table_latent(bench::ProblemId id) {
    switch (id) {
        case bench::ProblemId::C1: return {0.01, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C2: return {0.5, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C3: return {0.05, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C4: return {0.5, 0.9, 0.999, 1e-8};
    }
    return {};
}

localopt::AdamConfig table_post(bench::ProblemId id) {
    switch (id) {
        case bench::ProblemId::C1: return {0.001, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C2: return {0.5, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C3: return {0.05, 0.9, 0.999, 1e-8};
        case bench::ProblemId::C4: return {0.5, 0.9, 0.999, 1e-8};
    }
    return {};
}

}  // namespace

AegoConfig default_config(bench::ProblemId id, int n) {
    AegoConfig cfg;
    cfg.problem = id;
    cfg.n = n;
    cfg.adam_train = table_train(id);
    cfg.adam_latent = table_latent(id);
    cfg.adam_post = table_post(id);
    cfg.de.gamma = 0;  // 5m at run time
    cfg.de.generations = 1000;
    cfg.de.weight_f = 0.6;
    cfg.de.chi0 = 0.95;
    cfg.de.restart_stall = 0;  // the published configuration has no restarts
    cfg.train.epochs = 100;
    cfg.train.batches_per_epoch = 20;
    return cfg;
}

double success_threshold(bench::ProblemId id) {
    switch (id) {
        case bench::ProblemId::C1: return 0.5;
        case bench::ProblemId::C2: return 0.5;
        case bench::ProblemId::C3: return 0.1;
        case bench::ProblemId::C4: return 0.1;
    }
    return 0.5;
}

void TraceRecorder::begin_phase(const std::string& phase) { phase_ = phase; }

void TraceRecorder::record(double cost) {
    ++n_f_;
    if (cost < best_) {
        best_ = cost;
        rows_.push_back({n_f_, best_, phase_});
    }
}

void TraceRecorder::record_all(const std::vector<double>& costs) {
    for (double c : costs) record(c);
}

void TraceRecorder::end_phase() {
    if (!rows_.empty() && rows_.back().n_f == n_f_) return;
    if (n_f_ == 0) return;
    rows_.push_back({n_f_, best_, phase_});
}

void save_report(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "aego_report 1\n";
    out << "problem: " << report.problem << '\n';
    out << "n: " << report.n << '\n';
    out << "m: " << report.m << '\n';
    out << "master_seed: " << report.master_seed << '\n';
    out << "final_cost: " << io::format_double(report.final_cost) << '\n';
    out << "best_cost: " << io::format_double(report.best_cost) << '\n';
    out << "success: " << (report.success ? "true" : "false") << '\n';
    out << "success_threshold: " << io::format_double(report.threshold) << '\n';
    out << "total_evaluations: " << report.total_evaluations << '\n';
    out << "final_reconstruction_loss: " << io::format_double(report.final_reconstruction_loss)
        << '\n';
    out << "latent_best_cost: " << io::format_double(report.latent_best_cost) << '\n';
    out << "phases:\n";
    for (const auto& [name, stats] : report.phases) {
        out << "  " << name << ":\n";
        out << "    evaluations: " << stats.evaluations << '\n';
        out << "    best_cost: " << io::format_double(stats.best_cost) << '\n';
        out << "    seconds: " << io::format_double(stats.seconds) << '\n';
    }
    out << "artifacts:\n";
    for (const auto& [name, file] : report.artifacts) out << "  " << name << ": " << file << '\n';
    out << "x_star:";
    for (Eigen::Index i = 0; i < report.x_star.size(); ++i)
        out << ' ' << io::format_double(report.x_star(i));
    out << '\n';
}

RunReport run_aego(const AegoConfig& cfg, const bench::Problem& problem,
                   io::LoadedBundle* bundle_out, std::vector<io::TraceRow>* trace_out,
                   const localopt::TrainingSet* shared_set,
                   const std::vector<double>* shared_unit_costs) {
    if (cfg.num_samples < 1 || cfg.lambda < 0 || cfg.mu < 0 || cfg.nu < 0 || cfg.m < 1)
        throw std::invalid_argument("run_aego: invalid configuration");

    const bool writing = !cfg.output_dir.empty();
    if (writing) std::filesystem::create_directories(cfg.output_dir);
    auto artifact = [&](const std::string& name) { return cfg.output_dir + "/" + name; };

    RunReport report;
    report.problem = bench::problem_name(cfg.problem);
    report.n = cfg.n;
    report.m = cfg.m;
    report.master_seed = cfg.master_seed;
    report.threshold = success_threshold(cfg.problem);

    TraceRecorder trace;

    // Phase 1: training samples by multi-start local search.
    trace.begin_phase("sampling");
    auto t0 = Clock::now();
    localopt::TrainingSet local_set;
    const localopt::TrainingSet* set = shared_set;
    if (!shared_set) {
        std::vector<double> unit_costs;
        local_set = localopt::generate_training_set(problem, cfg.num_samples, cfg.lambda,
                                                    cfg.adam_train,
                                                    derive_seed(cfg.master_seed, "sampling"),
                                                    cfg.threads, &unit_costs);
        trace.record_all(unit_costs);
        set = &local_set;
    } else if (shared_unit_costs) {
        trace.record_all(*shared_unit_costs);
    } else {
        // Loaded artifact: only the final costs are stored; keep n_F honest.
        for (Eigen::Index i = 0; i < shared_set->costs.size(); ++i)
            trace.record(shared_set->costs(i));
        trace.skip(shared_set->eval_count - shared_set->costs.size());
    }
    trace.end_phase();
    {
        PhaseStats stats;
        stats.evaluations = set->eval_count;
        stats.best_cost = trace.best();
        stats.seconds = elapsed_seconds(t0);
        report.phases.emplace_back("sampling", stats);
    }
    if (writing && !shared_set) {
        io::save_training_set(*set, artifact("training_set.txt"));
        report.artifacts.emplace_back("training_set", artifact("training_set.txt"));
    }

    // Phase 2: autoencoder training (no cost-function evaluations).
    t0 = Clock::now();
    nn::TrainConfig train_cfg = cfg.train;
    train_cfg.seed = derive_seed(cfg.master_seed, "train:m=" + std::to_string(cfg.m));
    nn::TrainedAutoencoder trained = nn::train_autoencoder(*set, cfg.m, train_cfg);
    report.epoch_losses = trained.epoch_losses;
    report.final_reconstruction_loss =
        nn::mean_reconstruction_loss(trained.bundle, set->samples, cfg.train.sample_weights);
    {
        PhaseStats stats;
        stats.evaluations = 0;
        stats.best_cost = trace.best();
        stats.seconds = elapsed_seconds(t0);
        report.phases.emplace_back("training", stats);
    }
    const std::string weights_name = "weights_m" + std::to_string(cfg.m) + ".txt";
    if (writing) {
        io::save_bundle(trained.bundle, train_cfg.seed,
                        report.problem + ":m=" + std::to_string(cfg.m), artifact(weights_name));
        report.artifacts.emplace_back("weights", artifact(weights_name));
    }
    if (bundle_out) {
        bundle_out->bundle = trained.bundle;
        bundle_out->seed = train_cfg.seed;
    }

    // Phase 3: differential evolution over the latent cube on c_mu.
    trace.begin_phase("latent");
    t0 = Clock::now();
    latent::DEConfig de = cfg.de;
    if (de.gamma == 0) de.gamma = 5 * cfg.m;
    de.seed = derive_seed(cfg.master_seed, "latent");
    const long before_latent = trace.evaluations();
    latent::CostFn cost = [&](const Eigen::VectorXd& z) {
        latent::LatentEval eval =
            latent::latent_cost(trained.bundle, problem, z, cfg.mu, cfg.adam_latent);
        return latent::CandidateEval{eval.cost, std::move(eval.unit_costs)};
    };
    latent::DEResult de_result = latent::differential_evolution(
        cost, cfg.m, de, [&](const std::vector<double>& units) { trace.record_all(units); },
        cfg.threads);
    trace.end_phase();
    {
        PhaseStats stats;
        stats.evaluations = trace.evaluations() - before_latent;
        stats.best_cost = trace.best();
        stats.seconds = elapsed_seconds(t0);
        report.phases.emplace_back("latent", stats);
    }

    // Phase 4: post-processing.
    trace.begin_phase("post");
    t0 = Clock::now();
    const long before_post = trace.evaluations();
    latent::PostResult post = latent::post_process(trained.bundle, problem, de_result.best, cfg.mu,
                                                   cfg.nu, cfg.pp_mode, cfg.adam_latent,
                                                   cfg.adam_post);
    trace.record_all(post.unit_costs);
    trace.end_phase();
    {
        PhaseStats stats;
        stats.evaluations = trace.evaluations() - before_post;
        stats.best_cost = trace.best();
        stats.seconds = elapsed_seconds(t0);
        report.phases.emplace_back("post", stats);
    }

    report.x_star = post.x;
    report.final_cost = problem.value(report.x_star);
    report.success = report.final_cost < report.threshold;
    report.total_evaluations = trace.evaluations();
    report.best_cost = trace.best();
    report.latent_best_cost = de_result.best_cost;

    if (trace_out) *trace_out = trace.rows();
    if (writing) {
        const std::string trace_name = "trace_m" + std::to_string(cfg.m) + ".csv";
        io::save_trace(trace.rows(), artifact(trace_name));
        report.artifacts.emplace_back("trace", artifact(trace_name));
        const std::string report_name = "report_m" + std::to_string(cfg.m) + ".txt";
        save_report(report, artifact(report_name));
        report.artifacts.emplace_back("report", artifact(report_name));
    }
    return report;
}

RunReport run_de_baseline(const bench::Problem& problem, const latent::DEConfig& de, int threads,
                          std::vector<io::TraceRow>* trace_out, const std::string& output_dir) {
    RunReport report;
    report.problem = bench::problem_name(problem.id);
    report.n = problem.n;
    report.m = problem.n;
    report.master_seed = de.seed;
    report.threshold = success_threshold(problem.id);

    const Eigen::VectorXd span = problem.upper - problem.lower;
    TraceRecorder trace;
    trace.begin_phase("baseline");
    auto t0 = Clock::now();

    Eigen::VectorXd best_x;
    latent::CostFn cost = [&](const Eigen::VectorXd& z) {
        const double c = problem.value(problem.lower + z.cwiseProduct(span));
        return latent::CandidateEval{c, {c}};
    };
    latent::DEResult result = latent::differential_evolution(
        cost, problem.n, de, [&](const std::vector<double>& units) { trace.record_all(units); },
        threads);
    trace.end_phase();

    report.x_star = problem.lower + result.best.cwiseProduct(span);
    report.final_cost = problem.value(report.x_star);
    report.success = report.final_cost < report.threshold;
    report.total_evaluations = trace.evaluations();
    report.best_cost = trace.best();
    PhaseStats stats;
    stats.evaluations = trace.evaluations();
    stats.best_cost = trace.best();
    stats.seconds = elapsed_seconds(t0);
    report.phases.emplace_back("baseline", stats);

    if (trace_out) *trace_out = trace.rows();
    if (!output_dir.empty()) {
        std::filesystem::create_directories(output_dir);
        io::save_trace(trace.rows(), output_dir + "/trace_baseline.csv");
        report.artifacts.emplace_back("trace", output_dir + "/trace_baseline.csv");
        save_report(report, output_dir + "/report_baseline.txt");
        report.artifacts.emplace_back("report", output_dir + "/report_baseline.txt");
    }
    return report;
}

SweepOutcome run_sweep(const AegoConfig& cfg, const bench::Problem& problem,
                       const std::vector<int>& m_list) {
    if (m_list.empty()) throw std::invalid_argument("run_sweep: empty m list");

    const bool writing = !cfg.output_dir.empty();
    if (writing) std::filesystem::create_directories(cfg.output_dir);

    std::vector<double> unit_costs;
    localopt::TrainingSet set = localopt::generate_training_set(
        problem, cfg.num_samples, cfg.lambda, cfg.adam_train,
        derive_seed(cfg.master_seed, "sampling"), cfg.threads, &unit_costs);
    if (writing) io::save_training_set(set, cfg.output_dir + "/training_set.txt");

    SweepOutcome outcome;
    outcome.curve.source = "AE";
    outcome.curve.dataset = "X_lambda";

    for (int m : m_list) {
        AegoConfig per_m = cfg;
        per_m.m = m;
        try {
            RunReport report = run_aego(per_m, problem, nullptr, nullptr, &set, &unit_costs);
            outcome.curve.m_values.push_back(m);
            outcome.curve.losses.push_back(report.final_reconstruction_loss);
            outcome.curve.variance_ratios.push_back(std::numeric_limits<double>::quiet_NaN());
            outcome.reports.push_back(std::move(report));
        } catch (const std::exception& e) {
            RunReport failed;
            failed.problem = bench::problem_name(cfg.problem);
            failed.n = cfg.n;
            failed.m = m;
            failed.master_seed = cfg.master_seed;
            failed.final_cost = std::numeric_limits<double>::quiet_NaN();
            failed.artifacts.emplace_back("error", e.what());
            outcome.reports.push_back(std::move(failed));
        }
    }

    if (writing) {
        std::vector<analysis::DimCurve> curves{outcome.curve};
        io::save_dim_curves(curves, cfg.output_dir + "/ae_losses.csv");
    }
    return outcome;
}

}  // namespace aego::pipeline
