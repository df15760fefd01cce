#include "aego/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aego::nn {

namespace {

constexpr double kEpsLog = 1e-7;  // clamp on discriminator log arguments

double clamp_unit(double y) { return std::min(std::max(y, kEpsLog), 1.0 - kEpsLog); }

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
    switch (a) {
        case Activation::Identity:
            return z;
        case Activation::Sigmoid:
            return (1.0 / (1.0 + (-z.array()).exp())).matrix();
        case Activation::Tanh:
            return z.array().tanh().matrix();
        case Activation::LeakyRelu:
            return z.array().max(0.3 * z.array()).matrix();
        case Activation::TanhLeakyRelu: {
            Eigen::ArrayXXd t = z.array().tanh();
            return t.max(0.3 * t).matrix();
        }
    }
    return z;
}

// Derivative with respect to the pre-activation.
Eigen::MatrixXd activate_derivative(Activation a, const Eigen::MatrixXd& z) {
    switch (a) {
        case Activation::Identity:
            return Eigen::MatrixXd::Ones(z.rows(), z.cols());
        case Activation::Sigmoid: {
            Eigen::ArrayXXd s = 1.0 / (1.0 + (-z.array()).exp());
            return (s * (1.0 - s)).matrix();
        }
        case Activation::Tanh: {
            Eigen::ArrayXXd t = z.array().tanh();
            return (1.0 - t.square()).matrix();
        }
        case Activation::LeakyRelu:
            return (z.array() >= 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()),
                                             Eigen::ArrayXXd::Constant(z.rows(), z.cols(), 0.3))
                .matrix();
        case Activation::TanhLeakyRelu: {
            Eigen::ArrayXXd t = z.array().tanh();
            Eigen::ArrayXXd slope = (t >= 0.0).select(Eigen::ArrayXXd::Ones(z.rows(), z.cols()),
                                                      Eigen::ArrayXXd::Constant(z.rows(), z.cols(), 0.3));
            return (slope * (1.0 - t.square())).matrix();
        }
    }
    return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

Eigen::VectorXd unit_weights(int n) { return Eigen::VectorXd::Ones(n); }

}  // namespace

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::TanhLeakyRelu: return "tanh_leaky_relu";
    }
    return "?";
}

Activation parse_activation(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "tanh") return Activation::Tanh;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    if (name == "tanh_leaky_relu") return Activation::TanhLeakyRelu;
    throw std::invalid_argument("unknown activation: " + name);
}

DenseNetwork build_network(const std::vector<int>& layer_dims,
                           const std::vector<Activation>& activations, std::uint64_t seed) {
    if (layer_dims.size() < 2) throw std::invalid_argument("build_network: need at least 2 layers");
    if (activations.size() != layer_dims.size() - 1)
        throw std::invalid_argument("build_network: one activation per connection required");
    for (int d : layer_dims)
        if (d < 1) throw std::invalid_argument("build_network: zero-width layer");

    DenseNetwork net;
    net.layer_dims = layer_dims;
    net.activations = activations;
    RngStream rng(seed);
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const int fan_in = layer_dims[l];
        const int fan_out = layer_dims[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return net;
}

Eigen::MatrixXd forward(const DenseNetwork& net, const Eigen::MatrixXd& x, ForwardCache* cache) {
    if (x.rows() != net.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    if (cache) {
        cache->pre.clear();
        cache->post.clear();
        cache->post.push_back(x);
    }
    Eigen::MatrixXd y = x;
    for (int l = 0; l < net.layer_count(); ++l) {
        Eigen::MatrixXd z = (net.weights[l] * y).colwise() + net.biases[l];
        y = activate(net.activations[l], z);
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->post.push_back(y);
        }
    }
    return y;
}

Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& x) {
    return forward(net, Eigen::MatrixXd(x), nullptr).col(0);
}

void NetworkGradients::init_zero(const DenseNetwork& net) {
    weights.clear();
    biases.clear();
    for (int l = 0; l < net.layer_count(); ++l) {
        weights.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    }
}

void NetworkGradients::add(const NetworkGradients& other) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] += other.weights[l];
        biases[l] += other.biases[l];
    }
}

void backward(const DenseNetwork& net, const ForwardCache& cache,
              const Eigen::MatrixXd& upstream, NetworkGradients& grads,
              Eigen::MatrixXd* input_grad) {
    if (grads.weights.empty()) grads.init_zero(net);
    Eigen::MatrixXd delta = upstream;
    for (int l = net.layer_count() - 1; l >= 0; --l) {
        delta = delta.cwiseProduct(activate_derivative(net.activations[l], cache.pre[l]));
        grads.weights[l] += delta * cache.post[l].transpose();
        grads.biases[l] += delta.rowwise().sum();
        if (l > 0 || input_grad) delta = net.weights[l].transpose() * delta;
    }
    if (input_grad) *input_grad = std::move(delta);
}

void AdamNetState::init_zero(const DenseNetwork& net) {
    m_w.clear();
    v_w.clear();
    m_b.clear();
    v_b.clear();
    for (int l = 0; l < net.layer_count(); ++l) {
        m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        v_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        m_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
        v_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    }
    t = 0;
}

void apply_adam(DenseNetwork& net, const NetworkGradients& grads, AdamNetState& state,
                const localopt::AdamConfig& cfg) {
    if (state.m_w.empty()) state.init_zero(net);
    state.t += 1;
    for (int l = 0; l < net.layer_count(); ++l) {
        localopt::adam_step(net.weights[l], grads.weights[l], state.m_w[l], state.v_w[l], state.t, cfg);
        localopt::adam_step(net.biases[l], grads.biases[l], state.m_b[l], state.v_b[l], state.t, cfg);
    }
}

BoxNorm BoxNorm::from_bounds(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    BoxNorm norm;
    norm.center = 0.5 * (lower + upper);
    norm.halfwidth = 0.5 * (upper - lower);
    if (norm.halfwidth.minCoeff() <= 0)
        throw std::invalid_argument("BoxNorm: bounds must satisfy lower < upper");
    return norm;
}

Eigen::VectorXd BoxNorm::to_internal(const Eigen::VectorXd& x) const {
    return (x - center).cwiseQuotient(halfwidth);
}

Eigen::VectorXd BoxNorm::to_box(const Eigen::VectorXd& xi) const {
    return center + xi.cwiseProduct(halfwidth);
}

Eigen::MatrixXd BoxNorm::to_internal_cols(const Eigen::MatrixXd& x) const {
    return (x.colwise() - center).array().colwise() / halfwidth.array();
}

std::pair<std::vector<int>, std::vector<Activation>> benchmark_encoder_shape(int n, int m) {
    return {{n, n, n, m},
            {Activation::TanhLeakyRelu, Activation::TanhLeakyRelu, Activation::Sigmoid}};
}

std::pair<std::vector<int>, std::vector<Activation>> benchmark_decoder_shape(int n, int m) {
    return {{m, n, n, n},
            {Activation::TanhLeakyRelu, Activation::TanhLeakyRelu, Activation::Tanh}};
}

std::pair<std::vector<int>, std::vector<Activation>> head_shape(int m) {
    return {{m, 50, 50, 50, 50, 50, 1},
            {Activation::Tanh, Activation::Tanh, Activation::Tanh, Activation::Tanh,
             Activation::Tanh, Activation::Sigmoid}};
}

// ---- loss passes -----------------------------------------------------------

RecResult reconstruction_pass(const DenseNetwork& encoder, const DenseNetwork& decoder,
                              const Eigen::MatrixXd& batch, const Eigen::VectorXd& weights) {
    const int n = static_cast<int>(batch.rows());
    const int b = static_cast<int>(batch.cols());

    ForwardCache enc_cache, dec_cache;
    Eigen::MatrixXd z = forward(encoder, batch, &enc_cache);
    Eigen::MatrixXd xh = forward(decoder, z, &dec_cache);

    Eigen::MatrixXd resid = xh - batch;
    Eigen::MatrixXd weighted = resid.array().colwise() * weights.array();

    RecResult result;
    result.loss = weighted.cwiseProduct(resid).sum() / (static_cast<double>(n) * b);

    Eigen::MatrixXd upstream = (2.0 / (static_cast<double>(n) * b)) * weighted;
    Eigen::MatrixXd z_grad;
    backward(decoder, dec_cache, upstream, result.dec_grads, &z_grad);
    backward(encoder, enc_cache, z_grad, result.enc_grads, nullptr);
    return result;
}

Dis1Result discriminator_pass(const DenseNetwork& encoder, const DenseNetwork& discriminator,
                              const Eigen::MatrixXd& batch, const Eigen::MatrixXd& z_prior) {
    const int b = static_cast<int>(batch.cols());
    Eigen::MatrixXd z_enc = forward(encoder, batch, nullptr);  // constant input here

    ForwardCache c1, c2;
    Eigen::RowVectorXd y1 = forward(discriminator, z_enc, &c1).row(0);
    Eigen::RowVectorXd y2 = forward(discriminator, z_prior, &c2).row(0);

    Dis1Result result;
    Eigen::RowVectorXd up1(b), up2(b);
    for (int s = 0; s < b; ++s) {
        const double a1 = clamp_unit(y1(s));
        const double a2 = clamp_unit(1.0 - y2(s));
        result.loss += -0.5 * (std::log(a1) + std::log(a2));
        const bool in1 = y1(s) > kEpsLog && y1(s) < 1.0 - kEpsLog;
        const bool in2 = y2(s) > kEpsLog && y2(s) < 1.0 - kEpsLog;
        up1(s) = in1 ? -0.5 / (a1 * b) : 0.0;
        up2(s) = in2 ? 0.5 / (a2 * b) : 0.0;
    }
    result.loss /= b;
    backward(discriminator, c1, up1, result.dis_grads, nullptr);
    backward(discriminator, c2, up2, result.dis_grads, nullptr);
    return result;
}

Dis2Result encoder_fool_pass(const DenseNetwork& encoder, const DenseNetwork& discriminator,
                             const Eigen::MatrixXd& batch) {
    const int b = static_cast<int>(batch.cols());
    ForwardCache enc_cache, dis_cache;
    Eigen::MatrixXd z = forward(encoder, batch, &enc_cache);
    Eigen::RowVectorXd y = forward(discriminator, z, &dis_cache).row(0);

    Dis2Result result;
    Eigen::RowVectorXd up(b);
    for (int s = 0; s < b; ++s) {
        const double a = clamp_unit(1.0 - y(s));
        result.loss += -std::log(a);
        const bool in = y(s) > kEpsLog && y(s) < 1.0 - kEpsLog;
        up(s) = in ? 1.0 / (a * b) : 0.0;
    }
    result.loss /= b;

    NetworkGradients frozen;  // discriminator parameters are not trained by this loss
    Eigen::MatrixXd z_grad;
    backward(discriminator, dis_cache, up, frozen, &z_grad);
    backward(encoder, enc_cache, z_grad, result.enc_grads, nullptr);
    return result;
}

SurrResult surrogate_pass(const DenseNetwork& encoder, const DenseNetwork& surrogate,
                          const Eigen::MatrixXd& batch, const Eigen::RowVectorXd& targets,
                          double beta_s) {
    const int b = static_cast<int>(batch.cols());
    ForwardCache enc_cache, sur_cache;
    Eigen::MatrixXd z = forward(encoder, batch, &enc_cache);
    Eigen::RowVectorXd y = forward(surrogate, z, &sur_cache).row(0);

    SurrResult result;
    Eigen::RowVectorXd diff = y - targets;
    result.loss = beta_s * diff.squaredNorm() / b;

    Eigen::RowVectorXd up = (2.0 * beta_s / b) * diff;
    Eigen::MatrixXd z_grad;
    backward(surrogate, sur_cache, up, result.sur_grads, &z_grad);
    backward(encoder, enc_cache, z_grad, result.enc_grads, nullptr);
    return result;
}

double scaled_cost_target(double cost, double cmin, double cmax) {
    if (!(cmax > cmin)) return 0.5;  // degenerate training set
    return 0.1 + 0.8 * (cost - cmin) / (cmax - cmin);
}

// ---- spec-level loss values --------------------------------------------------

double reconstruction_loss(const AutoencoderBundle& bundle, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& weights) {
    Eigen::VectorXd xi = bundle.norm.to_internal(x);
    Eigen::VectorXd xh = forward(bundle.decoder, forward(bundle.encoder, xi));
    Eigen::VectorXd w = weights.size() ? weights : unit_weights(static_cast<int>(x.size()));
    return w.cwiseProduct((xh - xi).cwiseAbs2()).sum() / static_cast<double>(x.size());
}

std::pair<double, double> discriminator_losses(const AutoencoderBundle& bundle,
                                               const Eigen::MatrixXd& batch_internal,
                                               RngStream& rng) {
    if (!bundle.discriminator) throw std::logic_error("discriminator_losses: no discriminator");
    const int b = static_cast<int>(batch_internal.cols());
    Eigen::MatrixXd z_prior(bundle.latent_dim, b);
    for (int s = 0; s < b; ++s)
        for (int j = 0; j < bundle.latent_dim; ++j) z_prior(j, s) = rng.uniform();

    Dis1Result d1 = discriminator_pass(bundle.encoder, *bundle.discriminator, batch_internal, z_prior);
    Dis2Result d2 = encoder_fool_pass(bundle.encoder, *bundle.discriminator, batch_internal);
    return {d1.loss, d2.loss};
}

double surrogate_loss(const AutoencoderBundle& bundle, const Eigen::MatrixXd& batch_internal,
                      const Eigen::VectorXd& costs, double cmin, double cmax, double beta_s) {
    if (!bundle.surrogate) throw std::logic_error("surrogate_loss: no surrogate");
    Eigen::RowVectorXd targets(costs.size());
    for (int i = 0; i < costs.size(); ++i) targets(i) = scaled_cost_target(costs(i), cmin, cmax);
    return surrogate_pass(bundle.encoder, *bundle.surrogate, batch_internal, targets, beta_s).loss;
}

// ---- training ----------------------------------------------------------------

std::vector<double> train_pair(DenseNetwork& encoder, DenseNetwork& decoder,
                               const Eigen::MatrixXd& data, const PairTrainOptions& opts) {
    const int n = static_cast<int>(data.rows());
    const int count = static_cast<int>(data.cols());
    const int batches = std::max(1, std::min(opts.batches_per_epoch, count));

    Eigen::VectorXd weights = opts.weights ? *opts.weights : unit_weights(n);
    if (weights.size() != n) throw std::invalid_argument("train_pair: weight length mismatch");
    if (opts.surrogate && (!opts.targets || opts.targets->size() != count))
        throw std::invalid_argument("train_pair: surrogate requires one target per sample");

    AdamNetState enc_state, dec_state, dis_state, sur_state;
    enc_state.init_zero(encoder);
    dec_state.init_zero(decoder);
    if (opts.discriminator) dis_state.init_zero(*opts.discriminator);
    if (opts.surrogate) sur_state.init_zero(*opts.surrogate);

    RngStream shuffle_rng(derive_seed(opts.seed, "shuffle"));
    RngStream coin_rng(derive_seed(opts.seed, "coin"));
    RngStream prior_rng(derive_seed(opts.seed, "prior"));

    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> epoch_losses;
    epoch_losses.reserve(opts.epochs);

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        for (int i = count - 1; i > 0; --i)
            std::swap(order[i], order[static_cast<int>(shuffle_rng.integer(i + 1))]);

        double epoch_loss = 0;
        int offset = 0;
        for (int batch = 0; batch < batches; ++batch) {
            const int size = count / batches + (batch < count % batches ? 1 : 0);
            Eigen::MatrixXd x(n, size);
            Eigen::RowVectorXd targets(opts.surrogate ? size : 0);
            for (int s = 0; s < size; ++s) {
                x.col(s) = data.col(order[offset + s]);
                if (opts.surrogate) targets(s) = (*opts.targets)(order[offset + s]);
            }
            offset += size;

            RecResult rec = reconstruction_pass(encoder, decoder, x, weights);
            if (std::isnan(rec.loss))
                throw std::runtime_error("train_pair: NaN loss in " + opts.phase_label +
                                         " at epoch " + std::to_string(epoch) + " batch " +
                                         std::to_string(batch));
            epoch_loss += rec.loss * size;

            NetworkGradients enc_grads = std::move(rec.enc_grads);

            if (opts.discriminator) {
                const bool coin1 = coin_rng.bernoulli(opts.p_dis);
                const bool coin2 = coin_rng.bernoulli(opts.p_dis);
                if (coin1) {
                    Eigen::MatrixXd z_prior(opts.discriminator->input_dim(), size);
                    for (int s = 0; s < size; ++s)
                        for (int j = 0; j < z_prior.rows(); ++j) z_prior(j, s) = prior_rng.uniform();
                    Dis1Result d1 = discriminator_pass(encoder, *opts.discriminator, x, z_prior);
                    apply_adam(*opts.discriminator, d1.dis_grads, dis_state, opts.adam);
                }
                if (coin2) {
                    Dis2Result d2 = encoder_fool_pass(encoder, *opts.discriminator, x);
                    enc_grads.add(d2.enc_grads);
                }
            }

            if (opts.surrogate) {
                SurrResult sr = surrogate_pass(encoder, *opts.surrogate, x, targets, opts.beta_s);
                enc_grads.add(sr.enc_grads);
                apply_adam(*opts.surrogate, sr.sur_grads, sur_state, opts.adam);
            }

            apply_adam(encoder, enc_grads, enc_state, opts.adam);
            apply_adam(decoder, rec.dec_grads, dec_state, opts.adam);
        }
        epoch_losses.push_back(epoch_loss / count);
    }
    return epoch_losses;
}

namespace {

DenseNetwork slice_network(const DenseNetwork& net, int from, int to) {
    DenseNetwork part;
    part.layer_dims.assign(net.layer_dims.begin() + from, net.layer_dims.begin() + to + 1);
    part.weights.assign(net.weights.begin() + from, net.weights.begin() + to);
    part.biases.assign(net.biases.begin() + from, net.biases.begin() + to);
    part.activations.assign(net.activations.begin() + from, net.activations.begin() + to);
    return part;
}

void write_back(DenseNetwork& net, const DenseNetwork& part, int from) {
    for (int l = 0; l < part.layer_count(); ++l) {
        net.weights[from + l] = part.weights[l];
        net.biases[from + l] = part.biases[l];
    }
}

// Contiguous split into `parts` groups, first groups one larger when uneven.
std::vector<std::pair<int, int>> split_layers(int layers, int parts) {
    std::vector<std::pair<int, int>> ranges;
    int start = 0;
    for (int p = 0; p < parts; ++p) {
        int size = layers / parts + (p < layers % parts ? 1 : 0);
        ranges.emplace_back(start, start + size);
        start += size;
    }
    return ranges;
}

}  // namespace

void pretrain(AutoencoderBundle& bundle, const Eigen::MatrixXd& data_internal,
              const TrainConfig& cfg) {
    const int parts = cfg.n_pre;
    const int enc_layers = bundle.encoder.layer_count();
    const int dec_layers = bundle.decoder.layer_count();
    if (parts < 1 || parts > enc_layers || parts > dec_layers)
        throw std::invalid_argument("pretrain: invalid split count");

    auto enc_ranges = split_layers(enc_layers, parts);
    auto dec_ranges = split_layers(dec_layers, parts);

    // Pair j couples encoder group j with decoder group parts-1-j; their
    // interface widths must agree.
    for (int j = 0; j < parts; ++j) {
        const auto& er = enc_ranges[j];
        const auto& dr = dec_ranges[parts - 1 - j];
        if (bundle.encoder.layer_dims[er.first] != bundle.decoder.layer_dims[dr.second] ||
            bundle.encoder.layer_dims[er.second] != bundle.decoder.layer_dims[dr.first])
            throw std::invalid_argument("pretrain: split interface widths mismatch");
    }

    Eigen::MatrixXd stage_input = data_internal;
    for (int j = 0; j < parts; ++j) {
        const auto& er = enc_ranges[j];
        const auto& dr = dec_ranges[parts - 1 - j];
        DenseNetwork enc_part = slice_network(bundle.encoder, er.first, er.second);
        DenseNetwork dec_part = slice_network(bundle.decoder, dr.first, dr.second);

        PairTrainOptions opts;
        opts.epochs = cfg.pretrain_epochs;
        opts.batches_per_epoch = cfg.batches_per_epoch;
        opts.adam = cfg.adam;
        opts.seed = derive_seed(cfg.seed, "pretrain:" + std::to_string(j));
        opts.phase_label = "pretrain stage " + std::to_string(j);
        train_pair(enc_part, dec_part, stage_input, opts);

        write_back(bundle.encoder, enc_part, er.first);
        write_back(bundle.decoder, dec_part, dr.first);

        if (j + 1 < parts) stage_input = forward(enc_part, stage_input);
    }
}

TrainedAutoencoder train_autoencoder(const localopt::TrainingSet& trainset, int m,
                                     const TrainConfig& cfg) {
    if (m < 1) throw std::invalid_argument("train_autoencoder: m must be >= 1");
    const int count = static_cast<int>(trainset.samples.rows());
    if (count == 0) throw std::invalid_argument("train_autoencoder: empty training set");
    const int n = trainset.n;

    TrainedAutoencoder trained;
    AutoencoderBundle& bundle = trained.bundle;
    bundle.latent_dim = m;
    bundle.norm = BoxNorm::from_bounds(trainset.lower, trainset.upper);

    auto [enc_dims, enc_acts] = benchmark_encoder_shape(n, m);
    auto [dec_dims, dec_acts] = benchmark_decoder_shape(n, m);
    bundle.encoder = build_network(enc_dims, enc_acts, derive_seed(cfg.seed, "encoder"));
    bundle.decoder = build_network(dec_dims, dec_acts, derive_seed(cfg.seed, "decoder"));
    if (cfg.p_dis > 0) {
        auto [hd, ha] = head_shape(m);
        bundle.discriminator = build_network(hd, ha, derive_seed(cfg.seed, "discriminator"));
    }
    if (cfg.beta_s > 0) {
        auto [hd, ha] = head_shape(m);
        bundle.surrogate = build_network(hd, ha, derive_seed(cfg.seed, "surrogate"));
    }

    Eigen::MatrixXd data = bundle.norm.to_internal_cols(trainset.samples.transpose());

    if (cfg.pretrain_epochs > 0) pretrain(bundle, data, cfg);

    Eigen::RowVectorXd targets;
    if (bundle.surrogate) {
        const double cmin = trainset.costs.minCoeff();
        const double cmax = trainset.costs.maxCoeff();
        targets.resize(count);
        for (int i = 0; i < count; ++i)
            targets(i) = scaled_cost_target(trainset.costs(i), cmin, cmax);
    }

    PairTrainOptions opts;
    opts.epochs = cfg.epochs;
    opts.batches_per_epoch = cfg.batches_per_epoch;
    opts.adam = cfg.adam;
    opts.seed = derive_seed(cfg.seed, "train");
    opts.weights = cfg.sample_weights.size() ? &cfg.sample_weights : nullptr;
    opts.discriminator = bundle.discriminator ? &*bundle.discriminator : nullptr;
    opts.p_dis = cfg.p_dis;
    opts.surrogate = bundle.surrogate ? &*bundle.surrogate : nullptr;
    opts.beta_s = cfg.beta_s;
    opts.targets = bundle.surrogate ? &targets : nullptr;

    trained.epoch_losses = train_pair(bundle.encoder, bundle.decoder, data, opts);
    return trained;
}

double mean_reconstruction_loss(const AutoencoderBundle& bundle, const Eigen::MatrixXd& samples,
                                const Eigen::VectorXd& weights) {
    const int n = static_cast<int>(samples.cols());
    const int count = static_cast<int>(samples.rows());
    Eigen::MatrixXd data = bundle.norm.to_internal_cols(samples.transpose());
    Eigen::MatrixXd xh = forward(bundle.decoder, forward(bundle.encoder, data));
    Eigen::MatrixXd resid = xh - data;
    Eigen::VectorXd w = weights.size() ? weights : unit_weights(n);
    return (resid.array().square().colwise() * w.array()).sum() /
           (static_cast<double>(n) * count);
}

Eigen::VectorXd encode(const AutoencoderBundle& bundle, const Eigen::VectorXd& x) {
    return forward(bundle.encoder, bundle.norm.to_internal(x));
}

Eigen::VectorXd decode(const AutoencoderBundle& bundle, const Eigen::VectorXd& z) {
    return bundle.norm.to_box(forward(bundle.decoder, z));
}

}  // namespace aego::nn
