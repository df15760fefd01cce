#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "aego/pipeline.hpp"
#include "aego/rng.hpp"

using namespace aego;

namespace {

void check_trace_invariants(const std::vector<io::TraceRow>& rows) {
    REQUIRE(!rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].n_f > rows[i - 1].n_f);
        CHECK(rows[i].best_cost <= rows[i - 1].best_cost);
    }
}

pipeline::AegoConfig smoke_config() {
    pipeline::AegoConfig cfg = pipeline::default_config(bench::ProblemId::C4, 6);
    cfg.num_samples = 12;
    cfg.lambda = 3;
    cfg.mu = 2;
    cfg.nu = 4;
    cfg.m = 2;
    cfg.de.gamma = 6;
    cfg.de.generations = 5;
    cfg.train.epochs = 3;
    cfg.train.batches_per_epoch = 2;
    cfg.master_seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("default configs pin the published hyperparameters") {
    auto c1 = pipeline::default_config(bench::ProblemId::C1);
    CHECK(c1.num_samples == 5000);
    CHECK(c1.lambda == 100);
    CHECK(c1.mu == 5);
    CHECK(c1.nu == 1000);
    CHECK(c1.adam_train.alpha == 0.02);
    CHECK(c1.adam_train.beta1 == 0.5);
    CHECK(c1.adam_train.beta2 == 0.75);
    CHECK(c1.adam_latent.alpha == 0.01);
    CHECK(c1.adam_post.alpha == 0.001);
    CHECK(c1.de.generations == 1000);
    CHECK(c1.de.weight_f == 0.6);
    CHECK(c1.de.chi0 == 0.95);
    CHECK(c1.train.epochs == 100);
    CHECK(c1.train.batches_per_epoch == 20);

    auto c2 = pipeline::default_config(bench::ProblemId::C2);
    CHECK(c2.adam_train.alpha == 20.0);
    CHECK(c2.adam_latent.alpha == 0.5);
    auto c3 = pipeline::default_config(bench::ProblemId::C3);
    CHECK(c3.adam_train.alpha == 3.0);
    CHECK(c3.adam_train.beta1 == 0.5);
    CHECK(c3.adam_post.alpha == 0.05);
    auto c4 = pipeline::default_config(bench::ProblemId::C4);
    CHECK(c4.adam_train.alpha == 30.0);
    CHECK(c4.adam_post.alpha == 0.5);
}

TEST_CASE("smoke run completes and keeps every trace invariant") {
    pipeline::AegoConfig cfg = smoke_config();
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);
    std::vector<io::TraceRow> trace;
    pipeline::RunReport report = pipeline::run_aego(cfg, problem, nullptr, &trace);

    check_trace_invariants(trace);
    CHECK(report.final_cost == problem.value(report.x_star));
    CHECK(report.total_evaluations ==
          12 * 4 + 6 * 6 * 3 + (cfg.mu + 1 + cfg.nu));
    CHECK(report.phases.size() == 4);
    CHECK(report.phases[0].first == "sampling");
    CHECK(report.phases[0].second.evaluations == 12 * 4);
    CHECK(report.phases[2].first == "latent");
    CHECK(report.phases[2].second.evaluations == 6 * (5 + 1) * (2 + 1));
}

TEST_CASE("degenerate zero-step run still satisfies the contracts") {
    pipeline::AegoConfig cfg = smoke_config();
    cfg.lambda = 0;
    cfg.mu = 0;
    cfg.nu = 0;
    cfg.train.epochs = 1;
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);
    std::vector<io::TraceRow> trace;
    pipeline::RunReport report = pipeline::run_aego(cfg, problem, nullptr, &trace);
    check_trace_invariants(trace);
    CHECK(report.final_cost == problem.value(report.x_star));
}

TEST_CASE("end-to-end runs are deterministic and thread-count independent") {
    pipeline::AegoConfig cfg = smoke_config();
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);

    std::vector<io::TraceRow> t1, t8;
    cfg.threads = 1;
    pipeline::RunReport a = pipeline::run_aego(cfg, problem, nullptr, &t1);
    cfg.threads = 8;
    pipeline::RunReport b = pipeline::run_aego(cfg, problem, nullptr, &t8);

    CHECK(a.final_cost == b.final_cost);
    CHECK(a.x_star.cwiseEqual(b.x_star).all());
    REQUIRE(t1.size() == t8.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].n_f == t8[i].n_f);
        CHECK(t1[i].best_cost == t8[i].best_cost);
        CHECK(t1[i].phase == t8[i].phase);
    }
}

TEST_CASE("sampling-phase best equals the minimum over all evaluated points") {
    pipeline::AegoConfig cfg = smoke_config();
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);

    std::vector<double> units;
    auto set = localopt::generate_training_set(problem, cfg.num_samples, cfg.lambda,
                                               cfg.adam_train,
                                               derive_seed(cfg.master_seed, "sampling"),
                                               1, &units);
    const double expected = *std::min_element(units.begin(), units.end());

    std::vector<io::TraceRow> trace;
    pipeline::run_aego(cfg, problem, nullptr, &trace);
    double sampling_best = 0;
    for (const auto& row : trace)
        if (row.phase == "sampling") sampling_best = row.best_cost;
    CHECK(sampling_best == expected);
    CHECK(set.eval_count == static_cast<long>(units.size()));
}

TEST_CASE("baseline DE solves a sphere sanity problem") {
    bench::Problem sphere = bench::make_custom_problem(
        3, -2.0, 2.0, [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
            if (g) *g = 2.0 * x;
            return x.squaredNorm();
        });
    latent::DEConfig de{30, 300, 0.6, 0.9, 3};
    std::vector<io::TraceRow> trace;
    pipeline::RunReport report = pipeline::run_de_baseline(sphere, de, 2, &trace);
    CHECK(report.final_cost < 1e-3);
    CHECK(report.total_evaluations == 30 * 301);
    check_trace_invariants(trace);
    for (const auto& row : trace) CHECK(row.phase == "baseline");
}

TEST_CASE("sweeps share the training set and emit one report per m") {
    pipeline::AegoConfig cfg = smoke_config();
    cfg.output_dir = (std::filesystem::temp_directory_path() / "aego_sweep_test").string();
    std::filesystem::remove_all(cfg.output_dir);
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);

    pipeline::SweepOutcome outcome = pipeline::run_sweep(cfg, problem, {1, 2});
    CHECK(outcome.reports.size() == 2);
    CHECK(outcome.curve.m_values == std::vector<int>{1, 2});
    CHECK(outcome.curve.losses.size() == 2);
    CHECK(std::filesystem::exists(cfg.output_dir + "/training_set.txt"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/trace_m1.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/trace_m2.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/weights_m1.txt"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/ae_losses.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/report_m2.txt"));

    // Traces replay the identical sampling phase.
    auto t1 = io::load_trace(cfg.output_dir + "/trace_m1.csv");
    auto t2 = io::load_trace(cfg.output_dir + "/trace_m2.csv");
    std::size_t i = 0;
    while (i < t1.size() && t1[i].phase == "sampling") {
        CHECK(t2[i].n_f == t1[i].n_f);
        CHECK(t2[i].best_cost == t1[i].best_cost);
        ++i;
    }
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("run artifacts land in the output directory with a readable report") {
    pipeline::AegoConfig cfg = smoke_config();
    cfg.output_dir = (std::filesystem::temp_directory_path() / "aego_run_test").string();
    std::filesystem::remove_all(cfg.output_dir);
    bench::Problem problem = bench::make_problem(cfg.problem, cfg.n);
    pipeline::RunReport report = pipeline::run_aego(cfg, problem);

    CHECK(std::filesystem::exists(cfg.output_dir + "/training_set.txt"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/weights_m2.txt"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/trace_m2.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir + "/report_m2.txt"));
    CHECK(report.artifacts.size() >= 4);

    std::ifstream in(cfg.output_dir + "/report_m2.txt");
    std::string first;
    std::getline(in, first);
    CHECK(first == "aego_report 1");
    std::filesystem::remove_all(cfg.output_dir);
}
