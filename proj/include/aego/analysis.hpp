#ifndef AEGO_ANALYSIS_HPP
#define AEGO_ANALYSIS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "aego/localopt.hpp"
#include "aego/nn.hpp"

namespace aego::analysis {

/// Cyclic-Jacobi eigendecomposition of a symmetric matrix; eigenvalues
/// descending, eigenvectors in matching columns. Self-contained so the PCA
/// route stays independent of any external eigensolver.
void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors);

struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;   // columns, descending eigenvalue order
    Eigen::VectorXd eigenvalues;  // descending, clamped to >= 0
};

/// Eigendecomposition of the sample covariance (divisor N-1) of mean-centered
/// rows. Component signs fixed so the largest-magnitude entry is positive.
PcaModel pca_fit(const Eigen::MatrixXd& samples);

/// (reconstruction loss, explained variance ratio) of projecting onto the top
/// m components. The loss divisor (N-1)*n pairs with the covariance
/// convention, so on the fitted data loss(m) equals the tail eigenvalue sum
/// over n exactly.
std::pair<double, double> pca_metrics(const PcaModel& model, const Eigen::MatrixXd& samples, int m);

struct DimCurve {
    std::vector<int> m_values;
    std::vector<double> losses;
    std::vector<double> variance_ratios;  // PCA only; NaN entries for AE curves
    std::string source;                   // "PCA" | "AE"
    std::string dataset;                  // "X_0" | "X_lambda"
};

/// PCA loss/variance curve for the given latent dimensions.
DimCurve pca_sweep(const Eigen::MatrixXd& samples, const std::vector<int>& m_values,
                   const std::string& dataset);

/// Trains one autoencoder per m on the same data, per-m seeds derived from
/// cfg.seed; records the final mean reconstruction loss.
DimCurve reconstruction_sweep(const localopt::TrainingSet& trainset,
                              const std::vector<int>& m_values, const nn::TrainConfig& cfg,
                              int threads = 1);

/// Smallest m with loss(m) < tau whose successor (if any) improves by no more
/// than the plateau ratio rho.
std::optional<int> estimate_intrinsic_dim(const DimCurve& curve, double tau, double rho);

/// Default kink threshold: 1e-4 times the per-element variance of the initial
/// random sample set (the reconstruction-loss scale of a trivial model on
/// unstructured data).
double default_kink_tau(const Eigen::MatrixXd& samples);

constexpr double kDefaultKinkRho = 0.5;

/// Expected number of independent tries until an event of probability p: 1/p.
double expected_tries(double p);

}  // namespace aego::analysis

#endif
