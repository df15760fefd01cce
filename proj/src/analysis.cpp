#include "aego/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "aego/parallel.hpp"
#include "aego/rng.hpp"

namespace aego::analysis {

void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("symmetric_eigen: matrix must be square");

    Eigen::MatrixXd s = 0.5 * (a + a.transpose());
    vectors = Eigen::MatrixXd::Identity(n, n);

    const double scale = std::max(s.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = 1e-15 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(s(p, q)));
        if (off <= tol) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(s(p, q)) <= tol * 1e-2) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                Eigen::VectorXd sp = s.col(p), sq = s.col(q);
                s.col(p) = c * sp - sn * sq;
                s.col(q) = sn * sp + c * sq;
                Eigen::VectorXd rp = s.row(p), rq = s.row(q);
                s.row(p) = (c * rp - sn * rq).transpose();
                s.row(q) = (sn * rp + c * rq).transpose();
                Eigen::VectorXd vp = vectors.col(p), vq = vectors.col(q);
                vectors.col(p) = c * vp - sn * vq;
                vectors.col(q) = sn * vp + c * vq;
            }
        }
    }

    values = s.diagonal();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return values(i) > values(j); });
    Eigen::VectorXd sorted_values(n);
    Eigen::MatrixXd sorted_vectors(n, n);
    for (int i = 0; i < n; ++i) {
        sorted_values(i) = values(order[i]);
        sorted_vectors.col(i) = vectors.col(order[i]);
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

PcaModel pca_fit(const Eigen::MatrixXd& samples) {
    const int count = static_cast<int>(samples.rows());
    const int n = static_cast<int>(samples.cols());
    if (count < 2) throw std::invalid_argument("pca_fit: need at least 2 samples");

    PcaModel model;
    model.mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
    if (centered.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("pca_fit: degenerate data (all rows identical)");

    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(count - 1);
    symmetric_eigen(cov, model.eigenvalues, model.components);

    for (int j = 0; j < n; ++j) {
        if (model.eigenvalues(j) < -1e-12)
            throw std::runtime_error("pca_fit: covariance produced a negative eigenvalue");
        model.eigenvalues(j) = std::max(model.eigenvalues(j), 0.0);
        // Sign convention: largest-magnitude entry positive.
        int arg = 0;
        model.components.col(j).cwiseAbs().maxCoeff(&arg);
        if (model.components(arg, j) < 0) model.components.col(j) *= -1.0;
    }
    return model;
}

std::pair<double, double> pca_metrics(const PcaModel& model, const Eigen::MatrixXd& samples, int m) {
    const int n = static_cast<int>(samples.cols());
    const int count = static_cast<int>(samples.rows());
    if (m < 1 || m > n) throw std::invalid_argument("pca_metrics: m out of range");

    Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
    Eigen::MatrixXd top = model.components.leftCols(m);
    Eigen::MatrixXd resid = centered - (centered * top) * top.transpose();
    const double loss = resid.squaredNorm() / (static_cast<double>(count - 1) * n);

    const double total = model.eigenvalues.sum();
    const double ratio = total > 0 ? model.eigenvalues.head(m).sum() / total : 1.0;
    return {loss, ratio};
}

DimCurve pca_sweep(const Eigen::MatrixXd& samples, const std::vector<int>& m_values,
                   const std::string& dataset) {
    PcaModel model = pca_fit(samples);
    DimCurve curve;
    curve.source = "PCA";
    curve.dataset = dataset;
    for (int m : m_values) {
        auto [loss, ratio] = pca_metrics(model, samples, m);
        curve.m_values.push_back(m);
        curve.losses.push_back(loss);
        curve.variance_ratios.push_back(ratio);
    }
    return curve;
}

DimCurve reconstruction_sweep(const localopt::TrainingSet& trainset,
                              const std::vector<int>& m_values, const nn::TrainConfig& cfg,
                              int threads) {
    if (m_values.empty()) throw std::invalid_argument("reconstruction_sweep: empty m list");
    for (std::size_t i = 1; i < m_values.size(); ++i)
        if (m_values[i] <= m_values[i - 1])
            throw std::invalid_argument("reconstruction_sweep: m list must be ascending");

    DimCurve curve;
    curve.source = "AE";
    curve.dataset = "X_lambda";
    curve.m_values = m_values;
    curve.losses.resize(m_values.size());
    curve.variance_ratios.assign(m_values.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<std::string> failures(m_values.size());
    parallel_for(static_cast<int>(m_values.size()), threads, [&](int i) {
        nn::TrainConfig per_m = cfg;
        per_m.seed = derive_seed(cfg.seed, "sweep_m:" + std::to_string(m_values[i]));
        try {
            nn::TrainedAutoencoder trained = nn::train_autoencoder(trainset, m_values[i], per_m);
            curve.losses[i] = nn::mean_reconstruction_loss(trained.bundle, trainset.samples,
                                                           cfg.sample_weights);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < m_values.size(); ++i)
        if (!failures[i].empty())
            throw std::runtime_error("reconstruction_sweep: m=" + std::to_string(m_values[i]) +
                                     " failed: " + failures[i]);
    return curve;
}

std::optional<int> estimate_intrinsic_dim(const DimCurve& curve, double tau, double rho) {
    const std::size_t count = curve.m_values.size();
    if (count < 2) throw std::invalid_argument("estimate_intrinsic_dim: need at least 2 points");
    for (std::size_t i = 0; i < count; ++i) {
        if (curve.losses[i] >= tau) continue;
        if (i + 1 == count || curve.losses[i + 1] / curve.losses[i] > rho)
            return curve.m_values[i];
    }
    return std::nullopt;
}

double default_kink_tau(const Eigen::MatrixXd& samples) {
    Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
    const double var = centered.squaredNorm() /
                       (static_cast<double>(samples.rows()) * samples.cols());
    return 1e-4 * var;
}

double expected_tries(double p) {
    if (!(p > 0) || p > 1) throw std::invalid_argument("expected_tries: p must be in (0,1]");
    return 1.0 / p;
}

}  // namespace aego::analysis
