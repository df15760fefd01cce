#include "aego/bench.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aego/rng.hpp"

namespace aego::bench {

namespace {

// Guard on squared distances before they enter a denominator. Below it the
// analytic limit value is returned instead.
constexpr double kEpsSingular = 1e-12;
constexpr int kMaxInstanceDraws = 50;

}  // namespace

std::string problem_name(ProblemId id) {
    switch (id) {
        case ProblemId::C1: return "c1";
        case ProblemId::C2: return "c2";
        case ProblemId::C3: return "c3";
        case ProblemId::C4: return "c4";
    }
    return "?";
}

ProblemId parse_problem(const std::string& name) {
    if (name == "c1") return ProblemId::C1;
    if (name == "c2") return ProblemId::C2;
    if (name == "c3") return ProblemId::C3;
    if (name == "c4") return ProblemId::C4;
    throw std::invalid_argument("unknown problem id: " + name);
}

Eigen::MatrixXd random_rotation(int n, std::uint64_t seed) {
    RngStream rng(seed);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = rng.normal();

    // Modified Gram-Schmidt (implicit R diagonal positive), then one column
    // flip if needed for det +1.
    Eigen::MatrixXd q(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd v = a.col(j);
        for (int k = 0; k < j; ++k) v -= q.col(k).dot(v) * q.col(k);
        double norm = v.norm();
        if (norm < 1e-12) throw std::runtime_error("random_rotation: degenerate draw");
        q.col(j) = v / norm;
    }
    if (q.determinant() < 0) q.col(n - 1) *= -1.0;
    return q;
}

Eigen::MatrixXd apply_planted_map(const Eigen::MatrixXd& zeta, const Eigen::MatrixXd& rotation, int n) {
    const int count = static_cast<int>(zeta.rows());
    const int m = static_cast<int>(zeta.cols());
    if (m > n) throw std::invalid_argument("apply_planted_map: manifold dim exceeds n");

    Eigen::MatrixXd x1 = Eigen::MatrixXd::Zero(count, n);
    x1.leftCols(m) = zeta;

    Eigen::MatrixXd x2 = (x1 * rotation.transpose()).array().tanh();

    // Per-coordinate rescale over the whole point set so max |x3_j| = 9/10.
    Eigen::MatrixXd x3 = x2;
    for (int j = 0; j < n; ++j) {
        double colmax = x2.col(j).cwiseAbs().maxCoeff();
        if (colmax > 1e-300)
            x3.col(j) *= 0.9 / colmax;
        else
            x3.col(j).setZero();
    }

    return x3.array() + 0.1 * (1.0 - x3.array().square());
}

void validate_c1_instance(const C1Instance& inst) {
    const int k = inst.num_minima;
    if (inst.zeta.rows() != k || inst.zeta.cols() != inst.manifold_dim)
        throw std::runtime_error("c1 instance: zeta shape mismatch");
    if ((inst.zeta.row(0).array() - 0.1).abs().maxCoeff() != 0.0)
        throw std::runtime_error("c1 instance: first latent seed must be exactly 0.1*ones");
    if (inst.zeta.bottomRows(k - 1).cwiseAbs().maxCoeff() > 1.0)
        throw std::runtime_error("c1 instance: latent seeds out of [-1,1]");

    const int n = inst.n;
    Eigen::MatrixXd gram = inst.rotation.transpose() * inst.rotation;
    if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("c1 instance: rotation not orthogonal");
    if (std::abs(inst.rotation.determinant() - 1.0) > 1e-10)
        throw std::runtime_error("c1 instance: rotation determinant not +1");

    if (inst.minima.cwiseAbs().maxCoeff() > 1.0)
        throw std::runtime_error("c1 instance: minima escape [-1,1]^n");

    if (inst.c0.size() != k - 1)
        throw std::runtime_error("c1 instance: weight count mismatch");
    if (inst.c0.minCoeff() < 1.0 || inst.c0.maxCoeff() > 2.0)
        throw std::runtime_error("c1 instance: weights out of [1,2]");

    double sep = std::numeric_limits<double>::infinity();
    for (int i = 1; i < k; ++i)
        sep = std::min(sep, (inst.minima.row(i) - inst.minima.row(0)).norm());
    if (!(sep > inst.basin_radius))
        throw std::runtime_error("c1 instance: basin separation violated");
}

C1Instance build_c1_instance(std::uint64_t seed, int n, int manifold_dim,
                             int num_minima, double basin_radius) {
    if (manifold_dim > n) throw std::invalid_argument("build_c1_instance: M > n");
    if (num_minima < 2) throw std::invalid_argument("build_c1_instance: need at least 2 minima");
    if (!(basin_radius > 0)) throw std::invalid_argument("build_c1_instance: R must be positive");

    for (int attempt = 0; attempt < kMaxInstanceDraws; ++attempt) {
        const std::uint64_t attempt_seed = derive_seed(seed, static_cast<std::uint64_t>(attempt));
        RngStream rng(derive_seed(attempt_seed, "zeta"));

        C1Instance inst;
        inst.n = n;
        inst.manifold_dim = manifold_dim;
        inst.num_minima = num_minima;
        inst.basin_radius = basin_radius;
        inst.seed = seed;

        inst.zeta.resize(num_minima, manifold_dim);
        inst.zeta.row(0).setConstant(0.1);
        for (int i = 1; i < num_minima; ++i)
            for (int j = 0; j < manifold_dim; ++j)
                inst.zeta(i, j) = rng.uniform(-1.0, 1.0);

        inst.rotation = random_rotation(n, derive_seed(attempt_seed, "rotation"));
        inst.minima = apply_planted_map(inst.zeta, inst.rotation, n);

        RngStream wrng(derive_seed(attempt_seed, "weights"));
        inst.c0.resize(num_minima - 1);
        for (int i = 0; i + 1 < num_minima; ++i) inst.c0(i) = wrng.uniform(1.0, 2.0);

        double sep = std::numeric_limits<double>::infinity();
        for (int i = 1; i < num_minima; ++i)
            sep = std::min(sep, (inst.minima.row(i) - inst.minima.row(0)).norm());
        if (sep > basin_radius) {
            validate_c1_instance(inst);
            return inst;
        }
    }
    throw std::runtime_error(
        "build_c1_instance: basin radius too large for the requested minima density");
}

namespace {

// Shared machinery of the c1 value/gradient: squared distances to all minima
// and the f1/f2/f3 factors.
struct C1Work {
    Eigen::VectorXd d2;      // squared distance to each minimum
    int nearest_any = 0;     // lowest-index global argmin
    int nearest_tail = 1;    // lowest-index argmin over rows 1..K-1
    double f1 = 0, f2 = 0, f3 = 0, s1 = 0;  // s1 = ||x - x_1||^2
    double sum_u = 0, sum_cu = 0;           // u_i = 1/max(d2_i, eps)
};

void c1_factors(const C1Instance& inst, const Eigen::VectorXd& x, C1Work& w) {
    const int k = inst.num_minima;
    w.d2 = (inst.minima.rowwise() - x.transpose()).rowwise().squaredNorm();

    w.nearest_any = 0;
    w.nearest_tail = 1;
    for (int i = 1; i < k; ++i) {
        if (w.d2(i) < w.d2(w.nearest_tail)) w.nearest_tail = i;
    }
    if (w.d2(w.nearest_tail) < w.d2(0)) w.nearest_any = w.nearest_tail;

    w.f1 = w.d2(w.nearest_tail);
    w.s1 = w.d2(0);
    const double r2 = inst.basin_radius * inst.basin_radius;
    w.f3 = std::min(1.0, w.s1 / r2);

    w.sum_u = 0;
    w.sum_cu = 0;
    for (int i = 1; i < k; ++i) {
        double u = 1.0 / std::max(w.d2(i), kEpsSingular);
        w.sum_u += u;
        w.sum_cu += inst.c0(i - 1) * u;
    }
    w.f2 = (static_cast<double>(k - 1) + w.sum_cu) / w.sum_u;
}

// Shared by the value and gradient entry points so both return bit-identical
// costs.
double c1_combine(const C1Instance& inst, const C1Work& w) {
    if (w.d2(w.nearest_any) < kEpsSingular) {
        // Exact hit on a sample point: the limit value.
        if (w.nearest_any == 0) return 0.0;
        return inst.c0(w.nearest_any - 1) * w.f3;
    }
    return (5.0 * w.f1 + w.f2) * w.f3;
}

}  // namespace

double eval_c1(const C1Instance& inst, const Eigen::VectorXd& x) {
    C1Work w;
    c1_factors(inst, x, w);
    return c1_combine(inst, w);
}

namespace {

double c1_value_and_gradient(const C1Instance& inst, const Eigen::VectorXd& x,
                             Eigen::VectorXd& grad) {
    C1Work w;
    c1_factors(inst, x, w);
    const int k = inst.num_minima;
    const double r2 = inst.basin_radius * inst.basin_radius;

    // grad f1 via the active (lowest-index) minimizer.
    Eigen::VectorXd gf1 = 2.0 * (x - inst.minima.row(w.nearest_tail).transpose());

    // grad f2 = (grad A - f2 grad B) / B with A = (K-1) + sum c0 u,
    // B = sum u, grad u_i = -2 u_i^2 (x - x_i).
    Eigen::VectorXd u2(k - 1), cu2(k - 1);
    for (int i = 1; i < k; ++i) {
        double d2 = std::max(w.d2(i), kEpsSingular);
        double u = 1.0 / d2;
        double usq = (w.d2(i) > kEpsSingular) ? u * u : 0.0;  // clamp region treated as flat
        u2(i - 1) = usq;
        cu2(i - 1) = inst.c0(i - 1) * usq;
    }
    const auto tail = inst.minima.bottomRows(k - 1);
    Eigen::VectorXd ga = -2.0 * (cu2.sum() * x - tail.transpose() * cu2);
    Eigen::VectorXd gb = -2.0 * (u2.sum() * x - tail.transpose() * u2);
    Eigen::VectorXd gf2 = (ga - w.f2 * gb) / w.sum_u;

    Eigen::VectorXd gf3 = Eigen::VectorXd::Zero(x.size());
    if (w.s1 < r2) gf3 = (2.0 / r2) * (x - inst.minima.row(0).transpose());

    grad = w.f3 * (5.0 * gf1 + gf2) + (5.0 * w.f1 + w.f2) * gf3;
    return c1_combine(inst, w);
}

}  // namespace

double eval_c2(const Eigen::VectorXd& x) {
    double s = 0;
    for (int i = 0; i < x.size(); ++i) s += -x(i) * std::sin(std::sqrt(std::abs(x(i))));
    return s + 418.9829 * static_cast<double>(x.size());
}

double eval_c3(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    const double pi = std::numbers::pi;
    auto y = [](double v) { return (v + 5.0) / 4.0; };

    double u = 0;
    for (int i = 0; i < n; ++i) {
        double t = std::max(0.0, std::abs(x(i)) - 10.0);
        u += 100.0 * t * t * t * t;
    }

    double s0 = std::sin(pi * y(x(0)));
    double total = 10.0 * s0 * s0;
    for (int i = 0; i + 1 < n; ++i) {
        double dy = y(x(i)) - 1.0;
        double sn = std::sin(pi * y(x(i + 1)));
        total += dy * dy * (1.0 + 10.0 * sn * sn + u);
    }
    return pi / n * total;
}

double eval_c4(const Eigen::VectorXd& x) {
    double sum = 0, prod = 1;
    for (int i = 0; i < x.size(); ++i) {
        sum += x(i) * x(i);
        prod *= std::cos(x(i) / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum / 4000.0 - prod;
}

namespace {

void c2_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const int n = static_cast<int>(x.size());
    grad.resize(n);
    for (int i = 0; i < n; ++i) {
        double a = std::abs(x(i));
        double r = std::sqrt(a);
        // d/dx [-x sin(sqrt|x|)] = -sin(sqrt|x|) - (sqrt|x|/2) cos(sqrt|x|),
        // with subgradient 0 at the origin.
        grad(i) = (a == 0.0) ? 0.0 : -std::sin(r) - 0.5 * r * std::cos(r);
    }
}

void c3_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const int n = static_cast<int>(x.size());
    const double pi = std::numbers::pi;
    grad = Eigen::VectorXd::Zero(n);

    Eigen::VectorXd yv(n), sn(n);
    for (int i = 0; i < n; ++i) {
        yv(i) = (x(i) + 5.0) / 4.0;
        sn(i) = std::sin(pi * yv(i));
    }

    double u = 0;
    Eigen::VectorXd du(n);
    for (int i = 0; i < n; ++i) {
        double t = std::max(0.0, std::abs(x(i)) - 10.0);
        u += 100.0 * t * t * t * t;
        du(i) = (t > 0.0) ? 400.0 * t * t * t * (x(i) >= 0 ? 1.0 : -1.0) : 0.0;
    }

    double sum_sq = 0;  // sum over i of (y_i - 1)^2, the factor multiplying u
    for (int i = 0; i + 1 < n; ++i) {
        double dy = yv(i) - 1.0;
        sum_sq += dy * dy;
    }

    // First term: only x_1.
    grad(0) += 10.0 * 2.0 * sn(0) * std::cos(pi * yv(0)) * pi * 0.25;
    for (int i = 0; i + 1 < n; ++i) {
        double dy = yv(i) - 1.0;
        grad(i) += 2.0 * dy * 0.25 * (1.0 + 10.0 * sn(i + 1) * sn(i + 1) + u);
        grad(i + 1) += dy * dy * 10.0 * 2.0 * sn(i + 1) * std::cos(pi * yv(i + 1)) * pi * 0.25;
    }
    grad += sum_sq * du;
    grad *= pi / n;
}

void c4_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const int n = static_cast<int>(x.size());
    grad.resize(n);
    Eigen::VectorXd c(n), s(n), inv_sqrt(n);
    for (int i = 0; i < n; ++i) {
        const double root = std::sqrt(static_cast<double>(i + 1));
        inv_sqrt(i) = 1.0 / root;
        double a = x(i) / root;
        c(i) = std::cos(a);
        s(i) = std::sin(a);
    }
    // Prefix/suffix products keep the per-coordinate leave-one-out product
    // well defined when some cosine vanishes.
    Eigen::VectorXd prefix(n + 1), suffix(n + 1);
    prefix(0) = 1;
    for (int i = 0; i < n; ++i) prefix(i + 1) = prefix(i) * c(i);
    suffix(n) = 1;
    for (int i = n - 1; i >= 0; --i) suffix(i) = suffix(i + 1) * c(i);

    for (int i = 0; i < n; ++i)
        grad(i) = x(i) / 2000.0 + s(i) * inv_sqrt(i) * prefix(i) * suffix(i + 1);
}

}  // namespace

double Problem::value(const Eigen::VectorXd& x) const {
    if (custom) return custom(x, nullptr);
    switch (id) {
        case ProblemId::C1: return eval_c1(*instance, x);
        case ProblemId::C2: return eval_c2(x);
        case ProblemId::C3: return eval_c3(x);
        case ProblemId::C4: return eval_c4(x);
    }
    return 0;
}

double Problem::value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    if (custom) return custom(x, &grad);
    switch (id) {
        case ProblemId::C1: return c1_value_and_gradient(*instance, x, grad);
        case ProblemId::C2: c2_gradient(x, grad); return eval_c2(x);
        case ProblemId::C3: c3_gradient(x, grad); return eval_c3(x);
        case ProblemId::C4: c4_gradient(x, grad); return eval_c4(x);
    }
    return 0;
}

Eigen::VectorXd Problem::gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g;
    value_and_gradient(x, g);
    return g;
}

Problem make_problem(ProblemId id, int n) {
    if (n < 1) throw std::invalid_argument("problem dimension must be >= 1");
    if (id == ProblemId::C1)
        throw std::invalid_argument("c1 requires an instance; use make_c1_problem");
    Problem p;
    p.id = id;
    p.n = n;
    double bound = 0;
    switch (id) {
        case ProblemId::C1: bound = 1; break;
        case ProblemId::C2: bound = 500; break;
        case ProblemId::C3: bound = 50; break;
        case ProblemId::C4: bound = 500; break;
    }
    p.lower = Eigen::VectorXd::Constant(n, -bound);
    p.upper = Eigen::VectorXd::Constant(n, bound);
    return p;
}

Problem make_custom_problem(int n, double lower, double upper,
                            std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)> fn) {
    Problem p;
    p.id = ProblemId::C4;
    p.n = n;
    p.lower = Eigen::VectorXd::Constant(n, lower);
    p.upper = Eigen::VectorXd::Constant(n, upper);
    p.custom = std::move(fn);
    return p;
}

Problem make_c1_problem(std::shared_ptr<const C1Instance> instance) {
    Problem p;
    p.id = ProblemId::C1;
    p.n = instance->n;
    p.lower = Eigen::VectorXd::Constant(p.n, -1.0);
    p.upper = Eigen::VectorXd::Constant(p.n, 1.0);
    p.instance = std::move(instance);
    return p;
}

}  // namespace aego::bench
