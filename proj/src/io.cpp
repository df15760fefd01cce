#include "aego/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace aego::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

void expect(std::istream& in, const std::string& key) {
    std::string token;
    in >> token;
    if (token != key)
        throw std::runtime_error("parse error: expected '" + key + "', got '" + token + "'");
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(in >> m(i, j))) throw std::runtime_error("parse error: truncated matrix");
    return m;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_double(v(i));
    }
    out << '\n';
}

Eigen::VectorXd read_vector(std::istream& in, Eigen::Index size) {
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i)
        if (!(in >> v(i))) throw std::runtime_error("parse error: truncated vector");
    return v;
}

void write_network(std::ostream& out, const nn::DenseNetwork& net, const std::string& name) {
    out << "network " << name << '\n';
    out << "layers " << net.layer_dims.size();
    for (int d : net.layer_dims) out << ' ' << d;
    out << '\n';
    out << "activations";
    for (auto a : net.activations) out << ' ' << nn::activation_name(a);
    out << '\n';
    for (int l = 0; l < net.layer_count(); ++l) {
        write_matrix(out, net.weights[l]);
        write_vector(out, net.biases[l]);
    }
}

nn::DenseNetwork read_network(std::istream& in, const std::string& name) {
    expect(in, "network");
    expect(in, name);
    expect(in, "layers");
    std::size_t count = 0;
    in >> count;
    std::vector<int> dims(count);
    for (auto& d : dims) in >> d;
    expect(in, "activations");
    std::vector<nn::Activation> acts(count - 1);
    for (auto& a : acts) {
        std::string tag;
        in >> tag;
        a = nn::parse_activation(tag);
    }
    nn::DenseNetwork net;
    net.layer_dims = dims;
    net.activations = acts;
    for (std::size_t l = 0; l + 1 < count; ++l) {
        net.weights.push_back(read_matrix(in, dims[l + 1], dims[l]));
        net.biases.push_back(read_vector(in, dims[l + 1]));
    }
    return net;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_c1_instance(const bench::C1Instance& inst, const std::string& path) {
    auto out = open_out(path);
    out << "aego_c1_instance 1\n";
    out << "n " << inst.n << '\n';
    out << "manifold_dim " << inst.manifold_dim << '\n';
    out << "num_minima " << inst.num_minima << '\n';
    out << "basin_radius " << format_double(inst.basin_radius) << '\n';
    out << "seed " << inst.seed << '\n';
    out << "zeta\n";
    write_matrix(out, inst.zeta);
    out << "rotation\n";
    write_matrix(out, inst.rotation);
    out << "minima\n";
    write_matrix(out, inst.minima);
    out << "c0\n";
    write_vector(out, inst.c0);
}

bench::C1Instance load_c1_instance(const std::string& path) {
    auto in = open_in(path);
    expect(in, "aego_c1_instance");
    int version = 0;
    in >> version;
    if (version != 1) throw std::runtime_error("unsupported c1 instance version");

    bench::C1Instance inst;
    expect(in, "n");
    in >> inst.n;
    expect(in, "manifold_dim");
    in >> inst.manifold_dim;
    expect(in, "num_minima");
    in >> inst.num_minima;
    expect(in, "basin_radius");
    in >> inst.basin_radius;
    expect(in, "seed");
    in >> inst.seed;
    expect(in, "zeta");
    inst.zeta = read_matrix(in, inst.num_minima, inst.manifold_dim);
    expect(in, "rotation");
    inst.rotation = read_matrix(in, inst.n, inst.n);
    expect(in, "minima");
    inst.minima = read_matrix(in, inst.num_minima, inst.n);
    expect(in, "c0");
    inst.c0 = read_vector(in, inst.num_minima - 1);
    bench::validate_c1_instance(inst);
    return inst;
}

void save_training_set(const localopt::TrainingSet& set, const std::string& path) {
    auto out = open_out(path);
    out << "aego_training_set 1\n";
    out << "problem " << set.problem_id << '\n';
    out << "samples " << set.samples.rows() << '\n';
    out << "n " << set.n << '\n';
    out << "lambda " << set.lambda << '\n';
    out << "seed " << set.seed << '\n';
    out << "eval_count " << set.eval_count << '\n';
    out << "lower\n";
    write_vector(out, set.lower);
    out << "upper\n";
    write_vector(out, set.upper);
    out << "costs\n";
    write_vector(out, set.costs);
    out << "initial\n";
    write_matrix(out, set.initial);
    out << "optimized\n";
    write_matrix(out, set.samples);
}

localopt::TrainingSet load_training_set(const std::string& path) {
    auto in = open_in(path);
    expect(in, "aego_training_set");
    int version = 0;
    in >> version;
    if (version != 1) throw std::runtime_error("unsupported training set version");

    localopt::TrainingSet set;
    long count = 0;
    expect(in, "problem");
    in >> set.problem_id;
    expect(in, "samples");
    in >> count;
    expect(in, "n");
    in >> set.n;
    expect(in, "lambda");
    in >> set.lambda;
    expect(in, "seed");
    in >> set.seed;
    expect(in, "eval_count");
    in >> set.eval_count;
    expect(in, "lower");
    set.lower = read_vector(in, set.n);
    expect(in, "upper");
    set.upper = read_vector(in, set.n);
    expect(in, "costs");
    set.costs = read_vector(in, count);
    expect(in, "initial");
    set.initial = read_matrix(in, count, set.n);
    expect(in, "optimized");
    set.samples = read_matrix(in, count, set.n);
    return set;
}

void save_bundle(const nn::AutoencoderBundle& bundle, std::uint64_t seed,
                 const std::string& metadata, const std::string& path) {
    auto out = open_out(path);
    out << "aego_weights 1\n";
    out << "latent_dim " << bundle.latent_dim << '\n';
    out << "input_dim " << bundle.encoder.input_dim() << '\n';
    out << "seed " << seed << '\n';
    out << "metadata " << (metadata.empty() ? "-" : metadata) << '\n';
    out << "norm_center\n";
    write_vector(out, bundle.norm.center);
    out << "norm_halfwidth\n";
    write_vector(out, bundle.norm.halfwidth);
    out << "heads " << (bundle.discriminator ? 1 : 0) << ' ' << (bundle.surrogate ? 1 : 0) << '\n';
    write_network(out, bundle.encoder, "encoder");
    write_network(out, bundle.decoder, "decoder");
    if (bundle.discriminator) write_network(out, *bundle.discriminator, "discriminator");
    if (bundle.surrogate) write_network(out, *bundle.surrogate, "surrogate");
}

LoadedBundle load_bundle(const std::string& path) {
    auto in = open_in(path);
    expect(in, "aego_weights");
    int version = 0;
    in >> version;
    if (version != 1) throw std::runtime_error("unsupported weights version");

    LoadedBundle loaded;
    int n = 0;
    expect(in, "latent_dim");
    in >> loaded.bundle.latent_dim;
    expect(in, "input_dim");
    in >> n;
    expect(in, "seed");
    in >> loaded.seed;
    expect(in, "metadata");
    in >> loaded.metadata;
    expect(in, "norm_center");
    loaded.bundle.norm.center = read_vector(in, n);
    expect(in, "norm_halfwidth");
    loaded.bundle.norm.halfwidth = read_vector(in, n);
    expect(in, "heads");
    int has_dis = 0, has_sur = 0;
    in >> has_dis >> has_sur;
    loaded.bundle.encoder = read_network(in, "encoder");
    loaded.bundle.decoder = read_network(in, "decoder");
    if (has_dis) loaded.bundle.discriminator = read_network(in, "discriminator");
    if (has_sur) loaded.bundle.surrogate = read_network(in, "surrogate");
    return loaded;
}

void save_trace(const std::vector<TraceRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "n_F,best_cost,phase\n";
    for (const auto& row : rows)
        out << row.n_f << ',' << format_double(row.best_cost) << ',' << row.phase << '\n';
}

std::vector<TraceRow> load_trace(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "n_F,best_cost,phase")
        throw std::runtime_error("parse error: bad trace header in " + path);
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceRow row;
        std::size_t p1 = line.find(',');
        std::size_t p2 = line.find(',', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos)
            throw std::runtime_error("parse error: bad trace row: " + line);
        row.n_f = std::stol(line.substr(0, p1));
        row.best_cost = std::stod(line.substr(p1 + 1, p2 - p1 - 1));
        row.phase = line.substr(p2 + 1);
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_dim_curves(const std::vector<analysis::DimCurve>& curves, const std::string& path) {
    auto out = open_out(path);
    out << "source,dataset,m,loss,variance_ratio\n";
    for (const auto& curve : curves)
        for (std::size_t i = 0; i < curve.m_values.size(); ++i)
            out << curve.source << ',' << curve.dataset << ',' << curve.m_values[i] << ','
                << format_double(curve.losses[i]) << ',' << format_double(curve.variance_ratios[i])
                << '\n';
}

void save_latent_outcome(const LatentOutcome& outcome, const std::string& path) {
    auto out = open_out(path);
    out << "aego_latent_outcome 1\n";
    out << "m " << outcome.z_star.size() << '\n';
    out << "n " << outcome.chi_mu.size() << '\n';
    out << "mu " << outcome.mu << '\n';
    out << "cost " << format_double(outcome.cost) << '\n';
    out << "eval_count " << outcome.eval_count << '\n';
    out << "z_star\n";
    write_vector(out, outcome.z_star);
    out << "chi_mu\n";
    write_vector(out, outcome.chi_mu);
}

LatentOutcome load_latent_outcome(const std::string& path) {
    auto in = open_in(path);
    expect(in, "aego_latent_outcome");
    int version = 0;
    in >> version;
    if (version != 1) throw std::runtime_error("unsupported latent outcome version");
    LatentOutcome outcome;
    long m = 0, n = 0;
    expect(in, "m");
    in >> m;
    expect(in, "n");
    in >> n;
    expect(in, "mu");
    in >> outcome.mu;
    expect(in, "cost");
    in >> outcome.cost;
    expect(in, "eval_count");
    in >> outcome.eval_count;
    expect(in, "z_star");
    outcome.z_star = read_vector(in, m);
    expect(in, "chi_mu");
    outcome.chi_mu = read_vector(in, n);
    return outcome;
}

void save_vector(const Eigen::VectorXd& x, const std::string& path) {
    auto out = open_out(path);
    out << "aego_vector 1\n";
    out << "size " << x.size() << '\n';
    write_vector(out, x);
}

Eigen::VectorXd load_vector(const std::string& path) {
    auto in = open_in(path);
    expect(in, "aego_vector");
    int version = 0;
    in >> version;
    expect(in, "size");
    long size = 0;
    in >> size;
    return read_vector(in, size);
}

}  // namespace aego::io
