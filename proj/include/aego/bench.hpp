#ifndef AEGO_BENCH_HPP
#define AEGO_BENCH_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace aego::bench {

enum class ProblemId { C1, C2, C3, C4 };

std::string problem_name(ProblemId id);
ProblemId parse_problem(const std::string& name);

/// The planted-manifold instance behind c1: `num_minima` local minima arrayed
/// on an M-dimensional manifold inside [-1,1]^n, with the global optimum at
/// row 0 of `minima` and weights `c0` for all the others.
struct C1Instance {
    int n = 0;
    int manifold_dim = 0;      // M
    int num_minima = 0;
    double basin_radius = 0.0; // R
    std::uint64_t seed = 0;
    Eigen::MatrixXd zeta;      // num_minima x M latent seeds; row 0 = 0.1*ones
    Eigen::MatrixXd rotation;  // n x n orthogonal, det +1
    Eigen::MatrixXd minima;    // num_minima x n, rows inside [-1,1]^n
    Eigen::VectorXd c0;        // num_minima-1 weights in [1,2] for minima 1..K-1
};

struct Problem {
    ProblemId id = ProblemId::C4;
    int n = 0;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::shared_ptr<const C1Instance> instance;  // set iff id == C1

    // Diagnostic escape hatch: when set, value/gradient delegate here instead
    // of the benchmark dispatch (sanity problems in tests; never set by the
    // production pipeline). Fills grad only when the pointer is non-null.
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)> custom;

    double value(const Eigen::VectorXd& x) const;
    double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    Eigen::VectorXd clip(Eigen::VectorXd x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }
};

/// Wraps an arbitrary differentiable cost on a box for diagnostics and tests.
Problem make_custom_problem(int n, double lower, double upper,
                            std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)> fn);

/// The four-stage map T_D taking latent seeds to search-space minima:
/// zero-pad to n, tanh of the rotated points, per-coordinate rescale so the
/// largest magnitude in each column is 9/10, then x = x3 + (1/10)(1 - x3^2).
Eigen::MatrixXd apply_planted_map(const Eigen::MatrixXd& zeta, const Eigen::MatrixXd& rotation, int n);

/// Haar-like random rotation: orthonormalization of a standard-normal matrix,
/// sign-fixed to determinant +1.
Eigen::MatrixXd random_rotation(int n, std::uint64_t seed);

C1Instance build_c1_instance(std::uint64_t seed, int n = 100, int manifold_dim = 5,
                             int num_minima = 1000, double basin_radius = 0.5);

void validate_c1_instance(const C1Instance& inst);

double eval_c1(const C1Instance& inst, const Eigen::VectorXd& x);
double eval_c2(const Eigen::VectorXd& x);
double eval_c3(const Eigen::VectorXd& x);
double eval_c4(const Eigen::VectorXd& x);

Problem make_problem(ProblemId id, int n);
Problem make_c1_problem(std::shared_ptr<const C1Instance> instance);

}  // namespace aego::bench

#endif
