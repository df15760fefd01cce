#ifndef AEGO_NN_HPP
#define AEGO_NN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aego/localopt.hpp"
#include "aego/rng.hpp"

namespace aego::nn {

enum class Activation { Identity, Sigmoid, Tanh, LeakyRelu, TanhLeakyRelu };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& name);

struct DenseNetwork {
    std::vector<int> layer_dims;              // nu_0 .. nu_L
    std::vector<Eigen::MatrixXd> weights;     // W_l: nu_l x nu_{l-1}
    std::vector<Eigen::VectorXd> biases;      // b_l: nu_l
    std::vector<Activation> activations;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
};

/// Xavier-initialized weights from the seeded stream, zero biases.
DenseNetwork build_network(const std::vector<int>& layer_dims,
                           const std::vector<Activation>& activations, std::uint64_t seed);

struct ForwardCache {
    std::vector<Eigen::MatrixXd> pre;   // W y + b per layer
    std::vector<Eigen::MatrixXd> post;  // post[0] = input, post[l] = sigma(pre[l-1])
};

/// Columns are samples. Pass a cache to enable backward().
Eigen::MatrixXd forward(const DenseNetwork& net, const Eigen::MatrixXd& x,
                        ForwardCache* cache = nullptr);
Eigen::VectorXd forward(const DenseNetwork& net, const Eigen::VectorXd& x);

struct NetworkGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    void init_zero(const DenseNetwork& net);
    void add(const NetworkGradients& other);
};

/// Exact reverse-mode gradients; `upstream` is dL/d(output) with the same
/// shape as the forward output. Parameter gradients accumulate into `grads`;
/// dL/d(input) lands in input_grad when requested.
void backward(const DenseNetwork& net, const ForwardCache& cache,
              const Eigen::MatrixXd& upstream, NetworkGradients& grads,
              Eigen::MatrixXd* input_grad = nullptr);

struct AdamNetState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long t = 0;

    void init_zero(const DenseNetwork& net);
};

void apply_adam(DenseNetwork& net, const NetworkGradients& grads, AdamNetState& state,
                const localopt::AdamConfig& cfg);

/// Affine map between the problem box and the network's internal [-1,1]^n
/// representation.
struct BoxNorm {
    Eigen::VectorXd center;
    Eigen::VectorXd halfwidth;

    static BoxNorm from_bounds(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
    Eigen::VectorXd to_internal(const Eigen::VectorXd& x) const;
    Eigen::VectorXd to_box(const Eigen::VectorXd& xi) const;
    Eigen::MatrixXd to_internal_cols(const Eigen::MatrixXd& x) const;  // columns = samples
};

struct AutoencoderBundle {
    DenseNetwork encoder;   // n -> m, sigmoid bottleneck
    DenseNetwork decoder;   // m -> n, tanh output
    std::optional<DenseNetwork> discriminator;  // m -> 1
    std::optional<DenseNetwork> surrogate;      // m -> 1
    int latent_dim = 0;
    BoxNorm norm;
};

struct TrainConfig {
    int epochs = 100;
    int batches_per_epoch = 20;
    localopt::AdamConfig adam{0.001, 0.9, 0.999, 1e-8};
    double p_dis = 0.0;    // discriminator head enabled iff > 0
    double beta_s = 0.0;   // surrogate head enabled iff > 0
    Eigen::VectorXd sample_weights;  // per-element; empty = all ones
    int pretrain_epochs = 0;
    int n_pre = 1;
    std::uint64_t seed = 0;
};

/// Architecture used for every benchmark problem: dense n-n-n-m-n-n-n with
/// composite tanh/leaky-relu hidden layers, sigmoid bottleneck, tanh output.
std::pair<std::vector<int>, std::vector<Activation>> benchmark_encoder_shape(int n, int m);
std::pair<std::vector<int>, std::vector<Activation>> benchmark_decoder_shape(int n, int m);
std::pair<std::vector<int>, std::vector<Activation>> head_shape(int m);

// ---- loss passes (value + parameter gradients of the batch mean) ----------
// These are the single source of truth for each loss; the trainer composes
// them per batch and the test suite probes them against finite differences.

struct RecResult {
    double loss = 0;
    NetworkGradients enc_grads, dec_grads;
};
RecResult reconstruction_pass(const DenseNetwork& encoder, const DenseNetwork& decoder,
                              const Eigen::MatrixXd& batch, const Eigen::VectorXd& weights);

struct Dis1Result {
    double loss = 0;
    NetworkGradients dis_grads;
};
Dis1Result discriminator_pass(const DenseNetwork& encoder, const DenseNetwork& discriminator,
                              const Eigen::MatrixXd& batch, const Eigen::MatrixXd& z_prior);

struct Dis2Result {
    double loss = 0;
    NetworkGradients enc_grads;
};
Dis2Result encoder_fool_pass(const DenseNetwork& encoder, const DenseNetwork& discriminator,
                             const Eigen::MatrixXd& batch);

struct SurrResult {
    double loss = 0;
    NetworkGradients enc_grads, sur_grads;
};
SurrResult surrogate_pass(const DenseNetwork& encoder, const DenseNetwork& surrogate,
                          const Eigen::MatrixXd& batch, const Eigen::RowVectorXd& targets,
                          double beta_s);

double scaled_cost_target(double cost, double cmin, double cmax);

// ---- spec-level loss values ------------------------------------------------

/// Mean weighted squared error per element between x and its round trip, in
/// internal coordinates.
double reconstruction_loss(const AutoencoderBundle& bundle, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& weights);

/// (L_D1, L_D2) for a batch of internal-coordinate samples against a uniform
/// [0,1]^m prior drawn from rng.
std::pair<double, double> discriminator_losses(const AutoencoderBundle& bundle,
                                               const Eigen::MatrixXd& batch_internal,
                                               RngStream& rng);

double surrogate_loss(const AutoencoderBundle& bundle, const Eigen::MatrixXd& batch_internal,
                      const Eigen::VectorXd& costs, double cmin, double cmax, double beta_s);

// ---- training ---------------------------------------------------------------

/// Batched reconstruction training of an (enc, dec) pair on `data`
/// (columns = samples), with optional adversarial and surrogate heads. Sample
/// order is reshuffled every epoch from the seeded stream; one Adam update
/// per network per batch. Returns the per-epoch mean reconstruction loss.
struct PairTrainOptions {
    int epochs = 0;
    int batches_per_epoch = 1;
    localopt::AdamConfig adam;
    std::uint64_t seed = 0;
    const Eigen::VectorXd* weights = nullptr;       // per-element; null = ones
    DenseNetwork* discriminator = nullptr;
    double p_dis = 0;
    DenseNetwork* surrogate = nullptr;
    double beta_s = 0;
    const Eigen::RowVectorXd* targets = nullptr;    // scaled costs, required with surrogate
    std::string phase_label = "train";              // for abort diagnostics
};
std::vector<double> train_pair(DenseNetwork& encoder, DenseNetwork& decoder,
                               const Eigen::MatrixXd& data, const PairTrainOptions& opts);

/// Layer-wise pretraining with the nested-pair loss: stage j reconstructs the
/// stage input through (E_j, D_j) only, outside-in. Layers outside the active
/// stage are untouched.
void pretrain(AutoencoderBundle& bundle, const Eigen::MatrixXd& data_internal,
              const TrainConfig& cfg);

struct TrainedAutoencoder {
    AutoencoderBundle bundle;
    std::vector<double> epoch_losses;
};

TrainedAutoencoder train_autoencoder(const localopt::TrainingSet& trainset, int m,
                                     const TrainConfig& cfg);

/// Mean reconstruction loss over a whole sample set (rows = samples, problem
/// coordinates).
double mean_reconstruction_loss(const AutoencoderBundle& bundle, const Eigen::MatrixXd& samples,
                                const Eigen::VectorXd& weights);

Eigen::VectorXd encode(const AutoencoderBundle& bundle, const Eigen::VectorXd& x);
Eigen::VectorXd decode(const AutoencoderBundle& bundle, const Eigen::VectorXd& z);

}  // namespace aego::nn

#endif
