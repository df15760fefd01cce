#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aego/nn.hpp"
#include "aego/rng.hpp"
#include "oracles.hpp"

using namespace aego;
using nn::Activation;

namespace {

// Flat parameter access for finite-difference probing.
double* param_ptr(nn::DenseNetwork& net, int flat) {
    for (int l = 0; l < net.layer_count(); ++l) {
        int wsize = static_cast<int>(net.weights[l].size());
        if (flat < wsize) return net.weights[l].data() + flat;
        flat -= wsize;
        int bsize = static_cast<int>(net.biases[l].size());
        if (flat < bsize) return net.biases[l].data() + flat;
        flat -= bsize;
    }
    return nullptr;
}

double grad_entry(const nn::NetworkGradients& grads, int flat) {
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        int wsize = static_cast<int>(grads.weights[l].size());
        if (flat < wsize) return grads.weights[l].data()[flat];
        flat -= wsize;
        int bsize = static_cast<int>(grads.biases[l].size());
        if (flat < bsize) return grads.biases[l].data()[flat];
        flat -= bsize;
    }
    return 0;
}

int param_count(const nn::DenseNetwork& net) {
    int count = 0;
    for (int l = 0; l < net.layer_count(); ++l)
        count += static_cast<int>(net.weights[l].size() + net.biases[l].size());
    return count;
}

// Probes `picks` random parameters of every involved network against central
// finite differences of `loss_fn`, with `grads` the analytic result.
template <typename LossFn>
void check_param_gradients(nn::DenseNetwork& net, const nn::NetworkGradients& grads,
                           const LossFn& loss_fn, RngStream& rng, int picks, double tol = 1e-5) {
    const int count = param_count(net);
    for (int probe = 0; probe < picks; ++probe) {
        const int flat = static_cast<int>(rng.integer(count));
        double* p = param_ptr(net, flat);
        const double saved = *p;
        const double h = 1e-6 * std::max(1.0, std::abs(saved));
        *p = saved + h;
        const double up = loss_fn();
        *p = saved - h;
        const double down = loss_fn();
        *p = saved;
        const double fd = (up - down) / (2 * h);
        const double an = grad_entry(grads, flat);
        const double scale = std::max({1.0, std::abs(fd), std::abs(an)});
        CHECK(std::abs(fd - an) / scale < tol);
    }
}

Eigen::MatrixXd random_matrix(int rows, int cols, RngStream& rng, double lo = -1, double hi = 1) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

nn::AutoencoderBundle tiny_bundle(std::uint64_t seed, bool heads = false) {
    nn::AutoencoderBundle bundle;
    bundle.latent_dim = 2;
    bundle.encoder = nn::build_network({4, 5, 2}, {Activation::TanhLeakyRelu, Activation::Sigmoid},
                                       derive_seed(seed, "e"));
    bundle.decoder = nn::build_network({2, 5, 4}, {Activation::TanhLeakyRelu, Activation::Tanh},
                                       derive_seed(seed, "d"));
    if (heads) {
        bundle.discriminator = nn::build_network(
            {2, 6, 1}, {Activation::Tanh, Activation::Sigmoid}, derive_seed(seed, "dis"));
        bundle.surrogate = nn::build_network({2, 6, 1}, {Activation::Tanh, Activation::Sigmoid},
                                             derive_seed(seed, "sur"));
    }
    bundle.norm = nn::BoxNorm::from_bounds(Eigen::VectorXd::Constant(4, -1.0),
                                           Eigen::VectorXd::Constant(4, 1.0));
    return bundle;
}

}  // namespace

TEST_CASE("build_network initializes biases to zero and is seed-deterministic") {
    auto net = nn::build_network({3, 3}, {Activation::Identity}, 5);
    CHECK(net.biases[0].cwiseAbs().maxCoeff() == 0.0);
    auto again = nn::build_network({3, 3}, {Activation::Identity}, 5);
    CHECK(net.weights[0].cwiseEqual(again.weights[0]).all());
    auto other = nn::build_network({3, 3}, {Activation::Identity}, 6);
    CHECK_FALSE(net.weights[0].cwiseEqual(other.weights[0]).all());

    // Xavier range.
    const double limit = std::sqrt(6.0 / 6.0);
    CHECK(net.weights[0].cwiseAbs().maxCoeff() <= limit);
    CHECK_THROWS(nn::build_network({3, 0, 2}, {Activation::Tanh, Activation::Tanh}, 1));
    CHECK_THROWS(nn::build_network({3}, {}, 1));
}

TEST_CASE("benchmark architecture has the published shape") {
    auto [enc_dims, enc_acts] = nn::benchmark_encoder_shape(100, 5);
    auto [dec_dims, dec_acts] = nn::benchmark_decoder_shape(100, 5);
    CHECK(enc_dims == std::vector<int>{100, 100, 100, 5});
    CHECK(dec_dims == std::vector<int>{5, 100, 100, 100});
    CHECK(enc_acts.back() == Activation::Sigmoid);
    CHECK(dec_acts.back() == Activation::Tanh);
    CHECK(enc_acts.front() == Activation::TanhLeakyRelu);
}

TEST_CASE("forward: identity layer with identity weights reproduces the input") {
    nn::DenseNetwork net = nn::build_network({4, 4}, {Activation::Identity}, 1);
    net.weights[0] = Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd x(4);
    x << 1.0, -2.0, 0.5, 3.0;
    CHECK(nn::forward(net, x).cwiseEqual(x).all());
}

TEST_CASE("forward: zero sigmoid layer outputs one half") {
    nn::DenseNetwork net = nn::build_network({3, 2}, {Activation::Sigmoid}, 1);
    net.weights[0].setZero();
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(3, 0.7);
    Eigen::VectorXd y = nn::forward(net, x0);
    CHECK(y.isApproxToConstant(0.5));
}

TEST_CASE("forward matches a plain-loop dense oracle") {
    RngStream rng(9);
    nn::DenseNetwork net = nn::build_network(
        {3, 4, 2},
        {Activation::TanhLeakyRelu, Activation::Sigmoid}, 33);

    std::vector<std::vector<std::vector<double>>> w(2);
    std::vector<std::vector<double>> b(2);
    for (int l = 0; l < 2; ++l) {
        w[l].assign(net.weights[l].rows(), std::vector<double>(net.weights[l].cols()));
        b[l].assign(net.biases[l].size(), 0.0);
        for (int i = 0; i < net.weights[l].rows(); ++i)
            for (int j = 0; j < net.weights[l].cols(); ++j) w[l][i][j] = net.weights[l](i, j);
        for (int i = 0; i < net.biases[l].size(); ++i) b[l][i] = net.biases[l](i);
    }

    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x = random_matrix(3, 1, rng).col(0);
        auto expected = oracles::dense_forward_loops(w, b, {4, 1}, {x(0), x(1), x(2)});
        Eigen::VectorXd got = nn::forward(net, x);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(got(i) - expected[i]) < 1e-12);
    }
}

TEST_CASE("backward: zero upstream gives zero parameter gradients") {
    nn::DenseNetwork net = nn::build_network({3, 4, 2}, {Activation::Tanh, Activation::Sigmoid}, 2);
    nn::ForwardCache cache;
    nn::forward(net, Eigen::MatrixXd::Random(3, 5), &cache);
    nn::NetworkGradients grads;
    backward(net, cache, Eigen::MatrixXd::Zero(2, 5), grads);
    for (int l = 0; l < 2; ++l) {
        CHECK(grads.weights[l].cwiseAbs().maxCoeff() == 0.0);
        CHECK(grads.biases[l].cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("backward: all-scalar network matches the hand chain rule") {
    // y = sigmoid(w2 * tanh(w1 x + b1) + b2), L = y (upstream 1).
    nn::DenseNetwork net = nn::build_network({1, 1, 1}, {Activation::Tanh, Activation::Sigmoid}, 3);
    net.weights[0](0, 0) = 0.7;
    net.weights[1](0, 0) = -1.3;
    net.biases[0](0) = 0.2;
    net.biases[1](0) = 0.4;
    const double x = 0.9;

    nn::ForwardCache cache;
    Eigen::MatrixXd y = nn::forward(net, Eigen::MatrixXd::Constant(1, 1, x), &cache);
    nn::NetworkGradients grads;
    Eigen::MatrixXd input_grad;
    backward(net, cache, Eigen::MatrixXd::Constant(1, 1, 1.0), grads, &input_grad);

    const double z1 = 0.7 * x + 0.2;
    const double a1 = std::tanh(z1);
    const double z2 = -1.3 * a1 + 0.4;
    const double s = 1.0 / (1.0 + std::exp(-z2));
    CHECK(y(0, 0) == doctest::Approx(s).epsilon(1e-15));
    const double ds = s * (1 - s);
    CHECK(grads.weights[1](0, 0) == doctest::Approx(ds * a1).epsilon(1e-12));
    CHECK(grads.biases[1](0) == doctest::Approx(ds).epsilon(1e-12));
    const double da1 = ds * -1.3;
    const double dz1 = da1 * (1 - a1 * a1);
    CHECK(grads.weights[0](0, 0) == doctest::Approx(dz1 * x).epsilon(1e-12));
    CHECK(grads.biases[0](0) == doctest::Approx(dz1).epsilon(1e-12));
    CHECK(input_grad(0, 0) == doctest::Approx(dz1 * 0.7).epsilon(1e-12));
}

TEST_CASE("backward matches finite differences on random parameters") {
    RngStream rng(41);
    nn::DenseNetwork net = nn::build_network(
        {4, 6, 5, 3},
        {Activation::TanhLeakyRelu, Activation::LeakyRelu, Activation::Identity}, 12);
    Eigen::MatrixXd x = random_matrix(4, 7, rng);
    Eigen::MatrixXd target = random_matrix(3, 7, rng);

    auto loss = [&]() {
        Eigen::MatrixXd y = nn::forward(net, x);
        return 0.5 * (y - target).squaredNorm();
    };
    nn::ForwardCache cache;
    Eigen::MatrixXd y = nn::forward(net, x, &cache);
    nn::NetworkGradients grads;
    backward(net, cache, y - target, grads);
    check_param_gradients(net, grads, loss, rng, 50);
}

TEST_CASE("reconstruction loss: perfect round trip and zero weights give zero") {
    nn::AutoencoderBundle ident;
    ident.latent_dim = 3;
    ident.encoder = nn::build_network({3, 3}, {Activation::Identity}, 1);
    ident.decoder = nn::build_network({3, 3}, {Activation::Identity}, 2);
    ident.encoder.weights[0] = Eigen::MatrixXd::Identity(3, 3);
    ident.decoder.weights[0] = Eigen::MatrixXd::Identity(3, 3);
    ident.norm = nn::BoxNorm::from_bounds(Eigen::VectorXd::Constant(3, -1.0),
                                          Eigen::VectorXd::Constant(3, 1.0));
    Eigen::VectorXd x(3);
    x << 0.3, -0.4, 0.8;
    CHECK(nn::reconstruction_loss(ident, x, Eigen::VectorXd()) == doctest::Approx(0.0));

    // Decoder shifted in one coordinate by delta: loss = delta^2 / n.
    const double delta = 0.25;
    ident.decoder.biases[0](1) = delta;
    CHECK(nn::reconstruction_loss(ident, x, Eigen::VectorXd()) ==
          doctest::Approx(delta * delta / 3.0).epsilon(1e-12));
    CHECK(nn::reconstruction_loss(ident, x, Eigen::VectorXd::Zero(3)) == doctest::Approx(0.0));
}

TEST_CASE("discriminator loss values match the formulas") {
    nn::AutoencoderBundle bundle = tiny_bundle(21, true);
    // Zero final layer => sigmoid output exactly 1/2 for any input.
    auto& dis = *bundle.discriminator;
    dis.weights.back().setZero();
    dis.biases.back().setZero();

    RngStream rng(4);
    Eigen::MatrixXd batch = random_matrix(4, 6, rng);
    RngStream prior(7);
    auto [d1, d2] = nn::discriminator_losses(bundle, batch, prior);
    CHECK(d1 == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(d2 == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // Saturated discriminator output ~ 1: the encoder has failed to fool it
    // and L_D2 hits the clamped ceiling -ln(eps).
    dis.biases.back()(0) = 50.0;
    RngStream prior2(7);
    auto [d1b, d2b] = nn::discriminator_losses(bundle, batch, prior2);
    CHECK(d2b == doctest::Approx(-std::log(1e-7)).epsilon(1e-6));
    CHECK(d1b > 8.0);  // half of L_D1 saturates the same way
}

TEST_CASE("discriminator losses equal an independent scalar recomputation") {
    nn::AutoencoderBundle bundle = tiny_bundle(22, true);
    RngStream rng(11);
    Eigen::MatrixXd batch = random_matrix(4, 5, rng);

    RngStream prior_a(13);
    auto [d1, d2] = nn::discriminator_losses(bundle, batch, prior_a);

    // Recompute with explicit loops and a replayed prior stream.
    RngStream prior_b(13);
    Eigen::MatrixXd z_prior(2, 5);
    for (int s = 0; s < 5; ++s)
        for (int j = 0; j < 2; ++j) z_prior(j, s) = prior_b.uniform();
    double e1 = 0, e2 = 0;
    for (int s = 0; s < 5; ++s) {
        double yenc = nn::forward(*bundle.discriminator,
                                  nn::forward(bundle.encoder, Eigen::VectorXd(batch.col(s))))(0);
        double yprior = nn::forward(*bundle.discriminator, Eigen::VectorXd(z_prior.col(s)))(0);
        e1 += -0.5 * (std::log(yenc) + std::log(1 - yprior));
        e2 += -std::log(1 - yenc);
    }
    CHECK(d1 == doctest::Approx(e1 / 5).epsilon(1e-12));
    CHECK(d2 == doctest::Approx(e2 / 5).epsilon(1e-12));
}

TEST_CASE("surrogate targets and loss behave per the scaling") {
    CHECK(nn::scaled_cost_target(2.0, 2.0, 10.0) == doctest::Approx(0.1));
    CHECK(nn::scaled_cost_target(10.0, 2.0, 10.0) == doctest::Approx(0.9));
    CHECK(nn::scaled_cost_target(5.0, 5.0, 5.0) == doctest::Approx(0.5));  // degenerate

    nn::AutoencoderBundle bundle = tiny_bundle(23, true);
    RngStream rng(3);
    Eigen::MatrixXd batch = random_matrix(4, 4, rng);
    Eigen::VectorXd costs(4);
    costs << 1.0, 2.0, 3.0, 4.0;
    CHECK(nn::surrogate_loss(bundle, batch, costs, 1.0, 4.0, 0.0) == doctest::Approx(0.0));

    double expected = 0;
    for (int s = 0; s < 4; ++s) {
        double pred = nn::forward(*bundle.surrogate,
                                  nn::forward(bundle.encoder, Eigen::VectorXd(batch.col(s))))(0);
        double target = 0.1 + 0.8 * (costs(s) - 1.0) / 3.0;
        expected += 0.25 * (target - pred) * (target - pred);
    }
    CHECK(nn::surrogate_loss(bundle, batch, costs, 1.0, 4.0, 0.25) ==
          doctest::Approx(expected / 4).epsilon(1e-12));
}

TEST_CASE("every loss pass matches finite differences") {
    RngStream rng(55);
    nn::AutoencoderBundle bundle = tiny_bundle(77, true);
    Eigen::MatrixXd batch = random_matrix(4, 6, rng);
    Eigen::MatrixXd z_prior = random_matrix(2, 6, rng, 0, 1);
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(4);
    Eigen::RowVectorXd targets = random_matrix(1, 6, rng, 0.1, 0.9).row(0);

    SUBCASE("reconstruction") {
        auto rec = nn::reconstruction_pass(bundle.encoder, bundle.decoder, batch, weights);
        auto loss = [&]() {
            return nn::reconstruction_pass(bundle.encoder, bundle.decoder, batch, weights).loss;
        };
        check_param_gradients(bundle.encoder, rec.enc_grads, loss, rng, 30);
        check_param_gradients(bundle.decoder, rec.dec_grads, loss, rng, 30);
    }
    SUBCASE("discriminator update loss") {
        auto d1 = nn::discriminator_pass(bundle.encoder, *bundle.discriminator, batch, z_prior);
        auto loss = [&]() {
            return nn::discriminator_pass(bundle.encoder, *bundle.discriminator, batch, z_prior)
                .loss;
        };
        check_param_gradients(*bundle.discriminator, d1.dis_grads, loss, rng, 30);
    }
    SUBCASE("encoder fooling loss") {
        auto d2 = nn::encoder_fool_pass(bundle.encoder, *bundle.discriminator, batch);
        auto loss = [&]() {
            return nn::encoder_fool_pass(bundle.encoder, *bundle.discriminator, batch).loss;
        };
        check_param_gradients(bundle.encoder, d2.enc_grads, loss, rng, 30);
    }
    SUBCASE("surrogate loss") {
        auto sr = nn::surrogate_pass(bundle.encoder, *bundle.surrogate, batch, targets, 0.25);
        auto loss = [&]() {
            return nn::surrogate_pass(bundle.encoder, *bundle.surrogate, batch, targets, 0.25)
                .loss;
        };
        check_param_gradients(bundle.encoder, sr.enc_grads, loss, rng, 30);
        check_param_gradients(*bundle.surrogate, sr.sur_grads, loss, rng, 30);
    }
}

TEST_CASE("the arithmetic mean minimizes the summed squared distance") {
    RngStream rng(91);
    Eigen::MatrixXd points = random_matrix(40, 6, rng, -3, 3);
    Eigen::VectorXd mean = points.colwise().mean();
    auto objective = [&](const Eigen::VectorXd& x) {
        double total = 0;
        for (int i = 0; i < points.rows(); ++i)
            total += (points.row(i).transpose() - x).squaredNorm();
        return total;
    };
    const double at_mean = objective(mean);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd perturbed = mean;
        for (int j = 0; j < 6; ++j) perturbed(j) += rng.uniform(-0.5, 0.5);
        if ((perturbed - mean).norm() < 1e-12) continue;
        CHECK(objective(perturbed) > at_mean);
    }
}

TEST_CASE("pretraining trains stages outside-in and leaves other layers frozen") {
    RngStream rng(101);
    // Data on a 1-D segment in R^6.
    Eigen::MatrixXd data(6, 80);
    for (int s = 0; s < 80; ++s) {
        double t = rng.uniform(-0.8, 0.8);
        for (int j = 0; j < 6; ++j) data(j, s) = t * (j % 2 ? 0.5 : -0.7);
    }

    nn::AutoencoderBundle bundle;
    bundle.latent_dim = 1;
    bundle.encoder =
        nn::build_network({6, 6, 6, 1},
                          {Activation::TanhLeakyRelu, Activation::TanhLeakyRelu, Activation::Sigmoid},
                          derive_seed(5, "e"));
    bundle.decoder =
        nn::build_network({1, 6, 6, 6},
                          {Activation::TanhLeakyRelu, Activation::TanhLeakyRelu, Activation::Tanh},
                          derive_seed(5, "d"));
    bundle.norm = nn::BoxNorm::from_bounds(Eigen::VectorXd::Constant(6, -1.0),
                                           Eigen::VectorXd::Constant(6, 1.0));

    nn::TrainConfig cfg;
    cfg.pretrain_epochs = 5;
    cfg.batches_per_epoch = 4;
    cfg.n_pre = 3;
    cfg.seed = 500;

    nn::AutoencoderBundle pre = bundle;
    nn::pretrain(pre, data, cfg);

    // Reproduce stage 1 alone: the outermost pair is encoder layer 0 with
    // decoder layer 2. Later stages must have left those parameters alone.
    nn::PairTrainOptions opts;
    opts.epochs = cfg.pretrain_epochs;
    opts.batches_per_epoch = cfg.batches_per_epoch;
    opts.adam = cfg.adam;
    opts.seed = derive_seed(cfg.seed, "pretrain:0");
    nn::DenseNetwork enc_part = nn::build_network({6, 6}, {Activation::TanhLeakyRelu}, 1);
    enc_part.weights[0] = bundle.encoder.weights[0];
    enc_part.biases[0] = bundle.encoder.biases[0];
    nn::DenseNetwork dec_part = nn::build_network({6, 6}, {Activation::Tanh}, 1);
    dec_part.weights[0] = bundle.decoder.weights[2];
    dec_part.biases[0] = bundle.decoder.biases[2];
    train_pair(enc_part, dec_part, data, opts);

    CHECK(pre.encoder.weights[0].cwiseEqual(enc_part.weights[0]).all());
    CHECK(pre.decoder.weights[2].cwiseEqual(dec_part.weights[0]).all());
    // And the inner stages really moved their own layers.
    CHECK_FALSE(pre.encoder.weights[1].cwiseEqual(bundle.encoder.weights[1]).all());
    CHECK_FALSE(pre.encoder.weights[2].cwiseEqual(bundle.encoder.weights[2]).all());
}

TEST_CASE("pretrain with n_pre=1 equals plain reconstruction training") {
    RngStream rng(102);
    Eigen::MatrixXd data = random_matrix(4, 30, rng, -0.9, 0.9);
    nn::AutoencoderBundle a = tiny_bundle(300);
    nn::AutoencoderBundle b = tiny_bundle(300);

    nn::TrainConfig cfg;
    cfg.pretrain_epochs = 6;
    cfg.batches_per_epoch = 3;
    cfg.n_pre = 1;
    cfg.seed = 42;
    nn::pretrain(a, data, cfg);

    nn::PairTrainOptions opts;
    opts.epochs = 6;
    opts.batches_per_epoch = 3;
    opts.adam = cfg.adam;
    opts.seed = derive_seed(static_cast<std::uint64_t>(42), "pretrain:0");
    train_pair(b.encoder, b.decoder, data, opts);

    for (int l = 0; l < a.encoder.layer_count(); ++l)
        CHECK(a.encoder.weights[l].cwiseEqual(b.encoder.weights[l]).all());
    for (int l = 0; l < a.decoder.layer_count(); ++l)
        CHECK(a.decoder.weights[l].cwiseEqual(b.decoder.weights[l]).all());
}

TEST_CASE("pretraining rejects mismatched split widths") {
    nn::AutoencoderBundle bundle;
    bundle.latent_dim = 2;
    bundle.encoder = nn::build_network({4, 7, 2}, {Activation::Tanh, Activation::Sigmoid}, 1);
    bundle.decoder = nn::build_network({2, 5, 4}, {Activation::Tanh, Activation::Tanh}, 2);
    bundle.norm = nn::BoxNorm::from_bounds(Eigen::VectorXd::Constant(4, -1.0),
                                           Eigen::VectorXd::Constant(4, 1.0));
    nn::TrainConfig cfg;
    cfg.pretrain_epochs = 1;
    cfg.n_pre = 2;
    cfg.seed = 1;
    Eigen::MatrixXd data = Eigen::MatrixXd::Random(4, 10);
    CHECK_THROWS(nn::pretrain(bundle, data, cfg));
}

namespace {

localopt::TrainingSet segment_trainset(int count, std::uint64_t seed) {
    // 1-D segment embedded in R^10, box [-1,1]^10 so internal and problem
    // coordinates coincide.
    RngStream rng(seed);
    localopt::TrainingSet set;
    set.problem_id = "c4";
    set.n = 10;
    set.lambda = 0;
    set.seed = seed;
    set.eval_count = count;
    set.samples.resize(count, 10);
    Eigen::VectorXd direction(10);
    for (int j = 0; j < 10; ++j) direction(j) = std::sin(0.7 * j + 0.3);
    direction.normalize();
    for (int i = 0; i < count; ++i)
        set.samples.row(i) = (rng.uniform(-0.8, 0.8) * direction).transpose();
    set.initial = set.samples;
    set.costs = Eigen::VectorXd::Zero(count);
    set.lower = Eigen::VectorXd::Constant(10, -1.0);
    set.upper = Eigen::VectorXd::Constant(10, 1.0);
    return set;
}

}  // namespace

TEST_CASE("autoencoder training recovers a 1-D segment") {
    localopt::TrainingSet set = segment_trainset(300, 7);
    nn::TrainConfig cfg;
    cfg.epochs = 200;
    cfg.batches_per_epoch = 10;
    cfg.seed = 11;
    nn::TrainedAutoencoder trained = nn::train_autoencoder(set, 1, cfg);

    CHECK(trained.epoch_losses.back() <= trained.epoch_losses.front());
    const double final_loss = nn::mean_reconstruction_loss(trained.bundle, set.samples,
                                                           Eigen::VectorXd());
    CHECK(final_loss < 1e-3);

    // Latent codes live in (0,1), decoded points strictly inside the box.
    RngStream rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd probe(10);
        for (int j = 0; j < 10; ++j) probe(j) = rng.uniform(-1.0, 1.0);
        Eigen::VectorXd z = nn::encode(trained.bundle, probe);
        CHECK(z.minCoeff() > 0.0);
        CHECK(z.maxCoeff() < 1.0);
        Eigen::VectorXd back = nn::decode(trained.bundle, z);
        CHECK(back.maxCoeff() < 1.0);
        CHECK(back.minCoeff() > -1.0);
    }
}

TEST_CASE("converged 1-D segment model round-trips training samples tightly") {
    localopt::TrainingSet set = segment_trainset(200, 7);
    nn::TrainConfig cfg;
    cfg.epochs = 3000;
    cfg.batches_per_epoch = 5;
    cfg.seed = 11;
    nn::TrainedAutoencoder trained = nn::train_autoencoder(set, 1, cfg);

    Eigen::VectorXd x = set.samples.row(4).transpose();
    Eigen::VectorXd xr = nn::decode(trained.bundle, nn::encode(trained.bundle, x));
    CHECK(((xr - x).cwiseAbs().maxCoeff()) < 1e-3);
}

TEST_CASE("training is deterministic per seed and ignores inactive heads") {
    localopt::TrainingSet set = segment_trainset(60, 9);
    nn::TrainConfig cfg;
    cfg.epochs = 8;
    cfg.batches_per_epoch = 4;
    cfg.seed = 77;

    nn::TrainedAutoencoder a = nn::train_autoencoder(set, 2, cfg);
    nn::TrainedAutoencoder b = nn::train_autoencoder(set, 2, cfg);
    for (int l = 0; l < a.bundle.encoder.layer_count(); ++l)
        CHECK(a.bundle.encoder.weights[l].cwiseEqual(b.bundle.encoder.weights[l]).all());
    CHECK(a.epoch_losses == b.epoch_losses);

    // A discriminator whose coins never fire (p_dis = 0) must not perturb the
    // encoder/decoder trajectory.
    nn::TrainConfig with_idle_head = cfg;
    with_idle_head.p_dis = 0.0;
    nn::TrainedAutoencoder c = nn::train_autoencoder(set, 2, with_idle_head);
    for (int l = 0; l < a.bundle.encoder.layer_count(); ++l)
        CHECK(a.bundle.encoder.weights[l].cwiseEqual(c.bundle.encoder.weights[l]).all());
}

TEST_CASE("adversarial and surrogate heads train without destabilizing") {
    localopt::TrainingSet set = segment_trainset(120, 10);
    set.costs = set.samples.rowwise().squaredNorm();
    nn::TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batches_per_epoch = 6;
    cfg.seed = 5;
    cfg.p_dis = 0.3;
    cfg.beta_s = 0.25;
    nn::TrainedAutoencoder trained = nn::train_autoencoder(set, 2, cfg);
    CHECK(trained.bundle.discriminator.has_value());
    CHECK(trained.bundle.surrogate.has_value());
    CHECK(std::isfinite(trained.epoch_losses.back()));
    CHECK(trained.epoch_losses.back() <= trained.epoch_losses.front());
}

TEST_CASE("NaN losses abort with epoch and batch diagnostics") {
    localopt::TrainingSet set = segment_trainset(20, 12);
    nn::TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batches_per_epoch = 2;
    cfg.seed = 1;
    cfg.adam.alpha = std::numeric_limits<double>::quiet_NaN();
    bool threw = false;
    try {
        nn::train_autoencoder(set, 2, cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
    CHECK(threw);
}
