// Command-line front end for the AEGO pipeline: sample, train, optimize over
// the latent space, post-process, and analyze, with every stage runnable in
// isolation from saved artifacts.

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>

#include "aego/analysis.hpp"
#include "aego/bench.hpp"
#include "aego/io.hpp"
#include "aego/latent.hpp"
#include "aego/localopt.hpp"
#include "aego/nn.hpp"
#include "aego/pipeline.hpp"
#include "aego/rng.hpp"

using namespace aego;

namespace {

struct ProblemOptions {
    std::string problem = "c1";
    int n = 100;
    std::string instance_path;
    std::uint64_t instance_seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--problem", problem, "benchmark id: c1|c2|c3|c4")
            ->check(CLI::IsMember({"c1", "c2", "c3", "c4"}));
        cmd->add_option("--n", n, "search-space dimension");
        cmd->add_option("--instance", instance_path, "c1 instance file (built if absent)");
        cmd->add_option("--instance-seed", instance_seed, "seed for building the c1 instance");
    }

    bench::Problem resolve() const {
        bench::ProblemId id = bench::parse_problem(problem);
        if (id != bench::ProblemId::C1) return bench::make_problem(id, n);
        if (!instance_path.empty()) {
            auto inst = std::make_shared<bench::C1Instance>(io::load_c1_instance(instance_path));
            return bench::make_c1_problem(inst);
        }
        auto inst = std::make_shared<bench::C1Instance>(bench::build_c1_instance(instance_seed, n));
        return bench::make_c1_problem(inst);
    }
};

// The three Adam presets vary per problem, so their flags must be applied
// only when the user actually set them; everything else keeps plain defaults.
struct RunOptions {
    ProblemOptions problem;
    pipeline::AegoConfig values = pipeline::default_config(bench::ProblemId::C1, 100);
    std::string pp_mode = "pp1";
    double adam_vals[3][4] = {};
    CLI::Option* adam_opts[3][4] = {};

    void attach(CLI::App* cmd) {
        problem.attach(cmd);
        cmd->add_option("--samples", values.num_samples, "training samples N");
        cmd->add_option("--lambda", values.lambda, "LO steps per training sample");
        cmd->add_option("--mu", values.mu, "LO steps inside the latent cost");
        cmd->add_option("--nu", values.nu, "post-processing LO steps");
        cmd->add_option("--m", values.m, "latent dimension");
        cmd->add_option("--master-seed", values.master_seed, "root seed for every phase");
        cmd->add_option("--out-dir", values.output_dir, "artifact directory");
        cmd->add_option("--threads", values.threads, "worker threads");
        cmd->add_option("--pp-mode", pp_mode, "post-processing variant: pp1|pp2")
            ->check(CLI::IsMember({"pp1", "pp2"}));
        const char* groups[3] = {"adam_train", "adam_latent", "adam_post"};
        const char* fields[4] = {"alpha", "beta1", "beta2", "epsilon"};
        for (int g = 0; g < 3; ++g)
            for (int f = 0; f < 4; ++f)
                adam_opts[g][f] = cmd->add_option(
                    std::string("--") + groups[g] + "." + fields[f], adam_vals[g][f],
                    "per-problem preset unless set");
        cmd->add_option("--de.gamma", values.de.gamma, "population size (0 = 5m)");
        cmd->add_option("--de.generations", values.de.generations, "generations G");
        cmd->add_option("--de.f", values.de.weight_f, "differential weight F");
        cmd->add_option("--de.chi0", values.de.chi0, "crossover probability");
        cmd->add_option("--de.restart-stall", values.de.restart_stall,
                        "stagnant generations before repopulation (0 = off)");
        cmd->add_option("--train.epochs", values.train.epochs, "training epochs");
        cmd->add_option("--train.batches", values.train.batches_per_epoch, "batches per epoch");
        cmd->add_option("--train.p-dis", values.train.p_dis, "discriminator loss probability");
        cmd->add_option("--train.beta-s", values.train.beta_s, "surrogate loss weight");
        cmd->add_option("--train.pretrain-epochs", values.train.pretrain_epochs,
                        "pretraining epochs");
        cmd->add_option("--train.n-pre", values.train.n_pre, "pretraining split count");
        cmd->set_config("--config", "", "config file (key=value with [sections])");
    }

    pipeline::AegoConfig resolve_config() {
        bench::ProblemId id = bench::parse_problem(problem.problem);
        pipeline::AegoConfig cfg = values;
        cfg.problem = id;
        cfg.n = problem.n;
        cfg.pp_mode = latent::parse_post_mode(pp_mode);

        pipeline::AegoConfig presets = pipeline::default_config(id, problem.n);
        cfg.adam_train = presets.adam_train;
        cfg.adam_latent = presets.adam_latent;
        cfg.adam_post = presets.adam_post;
        localopt::AdamConfig* targets[3] = {&cfg.adam_train, &cfg.adam_latent, &cfg.adam_post};
        for (int g = 0; g < 3; ++g) {
            if (adam_opts[g][0]->count()) targets[g]->alpha = adam_vals[g][0];
            if (adam_opts[g][1]->count()) targets[g]->beta1 = adam_vals[g][1];
            if (adam_opts[g][2]->count()) targets[g]->beta2 = adam_vals[g][2];
            if (adam_opts[g][3]->count()) targets[g]->epsilon = adam_vals[g][3];
        }
        return cfg;
    }
};

void print_defaults(const std::string& name) {
    bench::ProblemId id = bench::parse_problem(name);
    pipeline::AegoConfig cfg = pipeline::default_config(id);
    std::cout << "problem=" << name << "\n";
    std::cout << "n=" << cfg.n << "\n";
    std::cout << "samples=" << cfg.num_samples << "\n";
    std::cout << "lambda=" << cfg.lambda << "\n";
    std::cout << "mu=" << cfg.mu << "\n";
    std::cout << "nu=" << cfg.nu << "\n";
    std::cout << "m=" << cfg.m << "\n";
    std::cout << "master-seed=" << cfg.master_seed << "\n";
    std::cout << "pp-mode=pp1\n";
    std::cout << "threads=" << cfg.threads << "\n";
    auto adam = [](const char* section, const localopt::AdamConfig& a) {
        std::cout << "[" << section << "]\n";
        std::cout << "alpha=" << a.alpha << "\n";
        std::cout << "beta1=" << a.beta1 << "\n";
        std::cout << "beta2=" << a.beta2 << "\n";
        std::cout << "epsilon=" << a.epsilon << "\n";
    };
    adam("adam_train", cfg.adam_train);
    adam("adam_latent", cfg.adam_latent);
    adam("adam_post", cfg.adam_post);
    std::cout << "[de]\n";
    std::cout << "gamma=" << cfg.de.gamma << "\n";
    std::cout << "generations=" << cfg.de.generations << "\n";
    std::cout << "f=" << cfg.de.weight_f << "\n";
    std::cout << "chi0=" << cfg.de.chi0 << "\n";
    std::cout << "[train]\n";
    std::cout << "epochs=" << cfg.train.epochs << "\n";
    std::cout << "batches=" << cfg.train.batches_per_epoch << "\n";
    std::cout << "p-dis=" << cfg.train.p_dis << "\n";
    std::cout << "beta-s=" << cfg.train.beta_s << "\n";
    std::cout << "pretrain-epochs=" << cfg.train.pretrain_epochs << "\n";
    std::cout << "n-pre=" << cfg.train.n_pre << "\n";
}

std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> values;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token = text.substr(start, comma - start);
        std::size_t dash = token.find("..");
        if (dash != std::string::npos) {
            int lo = std::stoi(token.substr(0, dash));
            int hi = std::stoi(token.substr(dash + 2));
            for (int m = lo; m <= hi; ++m) values.push_back(m);
        } else if (!token.empty()) {
            values.push_back(std::stoi(token));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

void print_report_summary(const pipeline::RunReport& report) {
    std::cout << "problem " << report.problem << "  m=" << report.m
              << "  seed=" << report.master_seed << "\n";
    std::cout << "final cost " << io::format_double(report.final_cost)
              << (report.success ? "  (success)" : "  (above threshold)") << "\n";
    std::cout << "evaluations " << report.total_evaluations << "\n";
    for (const auto& [name, stats] : report.phases) {
        std::cout << "  " << std::left << std::setw(9) << name << " n_F=" << std::setw(10)
                  << stats.evaluations << " best=" << io::format_double(stats.best_cost) << "  ("
                  << std::fixed << std::setprecision(2) << stats.seconds << "s)\n";
        std::cout << std::defaultfloat;
    }
    for (const auto& [name, path] : report.artifacts)
        std::cout << "  artifact " << name << ": " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autoencoder-enabled global optimization over benchmark problems"};
    app.require_subcommand(1);

    std::string defaults_problem = "c1";
    CLI::App* cmd_defaults = app.add_subcommand("defaults", "print the per-problem preset config");
    cmd_defaults->add_option("problem", defaults_problem, "c1|c2|c3|c4")->required();

    struct {
        std::uint64_t seed = 42;
        int n = 100, manifold = 5, minima = 1000;
        double radius = 0.5;
        std::string out = "c1_instance.txt";
    } b;
    CLI::App* cmd_build = app.add_subcommand("build-c1", "construct the planted c1 instance");
    cmd_build->add_option("--seed", b.seed, "construction seed");
    cmd_build->add_option("--n", b.n, "search-space dimension");
    cmd_build->add_option("--manifold-dim", b.manifold, "planted manifold dimension M");
    cmd_build->add_option("--minima", b.minima, "number of planted minima");
    cmd_build->add_option("--radius", b.radius, "basin radius R");
    cmd_build->add_option("--out", b.out, "output file")->required();

    struct {
        ProblemOptions problem;
        int samples = 5000, lambda = 100, threads = 1;
        std::uint64_t seed = 1;
        localopt::AdamConfig adam;
        std::string out = "training_set.txt";
    } g;
    CLI::Option* gen_alpha = nullptr;
    CLI::App* cmd_gen = app.add_subcommand("gen-train", "multi-start local search training set");
    g.problem.attach(cmd_gen);
    cmd_gen->add_option("--samples", g.samples, "sample count N");
    cmd_gen->add_option("--lambda", g.lambda, "LO steps per sample");
    cmd_gen->add_option("--seed", g.seed, "sampling seed");
    cmd_gen->add_option("--threads", g.threads, "worker threads");
    gen_alpha = cmd_gen->add_option("--adam.alpha", g.adam.alpha, "LO step size");
    cmd_gen->add_option("--adam.beta1", g.adam.beta1, "first-moment decay");
    cmd_gen->add_option("--adam.beta2", g.adam.beta2, "second-moment decay");
    cmd_gen->add_option("--out", g.out, "output file")->required();

    struct {
        std::string trainset = "training_set.txt";
        int m = 5;
        nn::TrainConfig cfg;
        std::string out = "weights.txt";
    } t;
    CLI::App* cmd_train = app.add_subcommand("train-ae", "train the autoencoder on a training set");
    cmd_train->add_option("--trainset", t.trainset, "training set file")->required();
    cmd_train->add_option("--m", t.m, "latent dimension");
    cmd_train->add_option("--epochs", t.cfg.epochs, "epochs");
    cmd_train->add_option("--batches", t.cfg.batches_per_epoch, "batches per epoch");
    cmd_train->add_option("--seed", t.cfg.seed, "training seed");
    cmd_train->add_option("--p-dis", t.cfg.p_dis, "discriminator loss probability");
    cmd_train->add_option("--beta-s", t.cfg.beta_s, "surrogate loss weight");
    cmd_train->add_option("--pretrain-epochs", t.cfg.pretrain_epochs, "pretraining epochs");
    cmd_train->add_option("--n-pre", t.cfg.n_pre, "pretraining split count");
    cmd_train->add_option("--out", t.out, "weights file")->required();

    struct {
        ProblemOptions problem;
        std::string weights = "weights.txt";
        int mu = 5, gamma = 0, generations = 1000, threads = 1, restart_stall = 0;
        double f = 0.6, chi0 = 0.95;
        std::uint64_t seed = 1;
        localopt::AdamConfig adam;
        std::string out = "latent.txt";
        std::string trace;
    } o;
    CLI::Option* opt_alpha = nullptr;
    CLI::App* cmd_opt = app.add_subcommand("optimize-latent", "differential evolution over c_mu");
    o.problem.attach(cmd_opt);
    cmd_opt->add_option("--weights", o.weights, "weights file")->required();
    cmd_opt->add_option("--mu", o.mu, "LO steps inside c_mu");
    cmd_opt->add_option("--gamma", o.gamma, "population (0 = 5m)");
    cmd_opt->add_option("--generations", o.generations, "generations G");
    cmd_opt->add_option("--f", o.f, "differential weight F");
    cmd_opt->add_option("--chi0", o.chi0, "crossover probability");
    cmd_opt->add_option("--restart-stall", o.restart_stall,
                        "stagnant generations before repopulation (0 = off)");
    cmd_opt->add_option("--seed", o.seed, "DE seed");
    cmd_opt->add_option("--threads", o.threads, "worker threads");
    opt_alpha = cmd_opt->add_option("--adam.alpha", o.adam.alpha, "LO step size inside c_mu");
    cmd_opt->add_option("--adam.beta1", o.adam.beta1, "first-moment decay");
    cmd_opt->add_option("--adam.beta2", o.adam.beta2, "second-moment decay");
    cmd_opt->add_option("--out", o.out, "latent outcome file")->required();
    cmd_opt->add_option("--trace", o.trace, "optional trace CSV");

    struct {
        ProblemOptions problem;
        std::string weights = "weights.txt";
        std::string latent = "latent.txt";
        int nu = 1000;
        std::string mode = "pp1";
        localopt::AdamConfig adam_latent, adam_post;
        std::string out = "x_star.txt";
    } p;
    CLI::Option* post_latent_alpha = nullptr;
    CLI::Option* post_post_alpha = nullptr;
    CLI::App* cmd_post = app.add_subcommand("post", "post-process a latent optimum");
    p.problem.attach(cmd_post);
    cmd_post->add_option("--weights", p.weights, "weights file")->required();
    cmd_post->add_option("--latent", p.latent, "latent outcome file")->required();
    cmd_post->add_option("--nu", p.nu, "post-processing LO steps");
    cmd_post->add_option("--mode", p.mode, "pp1|pp2")->check(CLI::IsMember({"pp1", "pp2"}));
    post_latent_alpha =
        cmd_post->add_option("--adam-latent.alpha", p.adam_latent.alpha, "latent-phase step size");
    post_post_alpha =
        cmd_post->add_option("--adam-post.alpha", p.adam_post.alpha, "post-phase step size");
    cmd_post->add_option("--out", p.out, "final point file")->required();

    RunOptions run_options;
    CLI::App* cmd_run = app.add_subcommand("run", "the full four-phase pipeline");
    run_options.attach(cmd_run);

    RunOptions sweep_options;
    std::string sweep_m_list = "2..7";
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "pipeline across latent dimensions");
    sweep_options.attach(cmd_sweep);
    cmd_sweep->add_option("--m-list", sweep_m_list, "e.g. 2..7 or 2,3,5");

    struct {
        ProblemOptions problem;
        int gamma = 100, generations = 10000, threads = 1;
        double f = 0.6, chi0 = 0.95;
        std::uint64_t seed = 1;
        std::string out_dir;
    } d;
    CLI::App* cmd_base = app.add_subcommand("baseline-de", "differential evolution over the box");
    d.problem.attach(cmd_base);
    cmd_base->add_option("--gamma", d.gamma, "population size");
    cmd_base->add_option("--generations", d.generations, "generations G");
    cmd_base->add_option("--f", d.f, "differential weight F");
    cmd_base->add_option("--chi0", d.chi0, "crossover probability");
    cmd_base->add_option("--seed", d.seed, "DE seed");
    cmd_base->add_option("--threads", d.threads, "worker threads");
    cmd_base->add_option("--out-dir", d.out_dir, "artifact directory");

    struct {
        std::string trainset = "training_set.txt";
        std::string m_list = "1..8";
        std::string out = "pca_curves.csv";
        double tau = 0;
        double rho = analysis::kDefaultKinkRho;
    } a;
    CLI::App* cmd_pca =
        app.add_subcommand("analyze-pca", "PCA loss/variance curves for X_0 and X_lambda");
    cmd_pca->add_option("--trainset", a.trainset, "training set file")->required();
    cmd_pca->add_option("--m-list", a.m_list, "latent dimensions, e.g. 1..8");
    cmd_pca->add_option("--tau", a.tau, "kink threshold (0 = 1e-4 * data variance)");
    cmd_pca->add_option("--rho", a.rho, "plateau ratio");
    cmd_pca->add_option("--out", a.out, "curve CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_defaults) {
            print_defaults(defaults_problem);
        } else if (*cmd_build) {
            bench::C1Instance inst =
                bench::build_c1_instance(b.seed, b.n, b.manifold, b.minima, b.radius);
            io::save_c1_instance(inst, b.out);
            std::cout << "wrote " << b.out << " (" << inst.num_minima
                      << " minima, M=" << inst.manifold_dim << ")\n";
        } else if (*cmd_gen) {
            bench::Problem problem = g.problem.resolve();
            if (gen_alpha->count() == 0)
                g.adam = pipeline::default_config(problem.id, problem.n).adam_train;
            auto set = localopt::generate_training_set(problem, g.samples, g.lambda, g.adam,
                                                       g.seed, g.threads);
            io::save_training_set(set, g.out);
            std::cout << "wrote " << g.out << "  min cost "
                      << io::format_double(set.costs.minCoeff()) << "  n_F " << set.eval_count
                      << "\n";
        } else if (*cmd_train) {
            auto set = io::load_training_set(t.trainset);
            nn::TrainedAutoencoder trained = nn::train_autoencoder(set, t.m, t.cfg);
            io::save_bundle(trained.bundle, t.cfg.seed,
                            set.problem_id + ":m=" + std::to_string(t.m), t.out);
            std::cout << "wrote " << t.out << "  final reconstruction loss "
                      << io::format_double(nn::mean_reconstruction_loss(trained.bundle, set.samples,
                                                                        t.cfg.sample_weights))
                      << "\n";
        } else if (*cmd_opt) {
            bench::Problem problem = o.problem.resolve();
            io::LoadedBundle loaded = io::load_bundle(o.weights);
            if (opt_alpha->count() == 0)
                o.adam = pipeline::default_config(problem.id, problem.n).adam_latent;
            latent::DEConfig de{o.gamma ? o.gamma : 5 * loaded.bundle.latent_dim, o.generations,
                                o.f, o.chi0, o.seed, o.restart_stall};
            pipeline::TraceRecorder trace;
            trace.begin_phase("latent");
            latent::CostFn cost = [&](const Eigen::VectorXd& z) {
                latent::LatentEval eval =
                    latent::latent_cost(loaded.bundle, problem, z, o.mu, o.adam);
                return latent::CandidateEval{eval.cost, std::move(eval.unit_costs)};
            };
            latent::DEResult result = latent::differential_evolution(
                cost, loaded.bundle.latent_dim, de,
                [&](const std::vector<double>& units) { trace.record_all(units); }, o.threads);
            trace.end_phase();

            latent::LatentEval best =
                latent::latent_cost(loaded.bundle, problem, result.best, o.mu, o.adam);
            io::LatentOutcome outcome;
            outcome.z_star = result.best;
            outcome.chi_mu = best.chi;
            outcome.cost = best.cost;
            outcome.mu = o.mu;
            outcome.eval_count = trace.evaluations();
            io::save_latent_outcome(outcome, o.out);
            if (!o.trace.empty()) io::save_trace(trace.rows(), o.trace);
            std::cout << "wrote " << o.out << "  best c_mu " << io::format_double(result.best_cost)
                      << "  n_F " << trace.evaluations() << "\n";
        } else if (*cmd_post) {
            bench::Problem problem = p.problem.resolve();
            io::LoadedBundle loaded = io::load_bundle(p.weights);
            io::LatentOutcome outcome = io::load_latent_outcome(p.latent);
            if (post_latent_alpha->count() == 0)
                p.adam_latent = pipeline::default_config(problem.id, problem.n).adam_latent;
            if (post_post_alpha->count() == 0)
                p.adam_post = pipeline::default_config(problem.id, problem.n).adam_post;
            latent::PostResult result = latent::post_process(
                loaded.bundle, problem, outcome.z_star, outcome.mu, p.nu,
                latent::parse_post_mode(p.mode), p.adam_latent, p.adam_post);
            io::save_vector(result.x, p.out);
            std::cout << "wrote " << p.out << "  final cost " << io::format_double(result.cost)
                      << "\n";
        } else if (*cmd_run) {
            pipeline::AegoConfig cfg = run_options.resolve_config();
            bench::Problem problem = run_options.problem.resolve();
            pipeline::RunReport report = pipeline::run_aego(cfg, problem);
            print_report_summary(report);
            return report.success ? 0 : 2;
        } else if (*cmd_sweep) {
            pipeline::AegoConfig cfg = sweep_options.resolve_config();
            bench::Problem problem = sweep_options.problem.resolve();
            std::vector<int> m_list = parse_m_list(sweep_m_list);
            pipeline::SweepOutcome outcome = pipeline::run_sweep(cfg, problem, m_list);
            for (const auto& report : outcome.reports) print_report_summary(report);
            std::cout << "reconstruction losses:";
            for (std::size_t i = 0; i < outcome.curve.m_values.size(); ++i)
                std::cout << "  m=" << outcome.curve.m_values[i] << ": "
                          << io::format_double(outcome.curve.losses[i]);
            std::cout << "\n";
        } else if (*cmd_base) {
            bench::Problem problem = d.problem.resolve();
            latent::DEConfig de{d.gamma, d.generations, d.f, d.chi0, d.seed};
            pipeline::RunReport report =
                pipeline::run_de_baseline(problem, de, d.threads, nullptr, d.out_dir);
            print_report_summary(report);
        } else if (*cmd_pca) {
            auto set = io::load_training_set(a.trainset);
            std::vector<int> m_list = parse_m_list(a.m_list);
            analysis::DimCurve random_curve = analysis::pca_sweep(set.initial, m_list, "X_0");
            analysis::DimCurve optimized_curve =
                analysis::pca_sweep(set.samples, m_list, "X_lambda");
            io::save_dim_curves({random_curve, optimized_curve}, a.out);

            const double tau = a.tau > 0 ? a.tau : analysis::default_kink_tau(set.initial);
            auto m_star = analysis::estimate_intrinsic_dim(optimized_curve, tau, a.rho);
            std::cout << "wrote " << a.out << "\n";
            std::cout << "kink estimate on X_lambda (tau=" << io::format_double(tau)
                      << ", rho=" << a.rho
                      << "): " << (m_star ? std::to_string(*m_star) : std::string("none")) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
