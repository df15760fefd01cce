#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aego/bench.hpp"
#include "aego/rng.hpp"
#include "oracles.hpp"

using namespace aego;

namespace {

// Plain-loop evaluation of c1 from the factor definitions, independent of the
// vectorized implementation.
double c1_reference(const bench::C1Instance& inst, const Eigen::VectorXd& x) {
    const int k = inst.num_minima;
    double f1 = std::numeric_limits<double>::infinity();
    double num = 0, den = 0;
    for (int i = 1; i < k; ++i) {
        double d2 = 0;
        for (int j = 0; j < inst.n; ++j) {
            double d = x(j) - inst.minima(i, j);
            d2 += d * d;
        }
        f1 = std::min(f1, d2);
        num += 1.0 + inst.c0(i - 1) / d2;
        den += 1.0 / d2;
    }
    double s1 = 0;
    for (int j = 0; j < inst.n; ++j) {
        double d = x(j) - inst.minima(0, j);
        s1 += d * d;
    }
    double f3 = std::min(1.0, s1 / (inst.basin_radius * inst.basin_radius));
    return (5.0 * f1 + num / den) * f3;
}

bench::C1Instance small_instance(std::uint64_t seed = 42) {
    return bench::build_c1_instance(seed, 20, 3, 50, 0.5);
}

}  // namespace

TEST_CASE("c2 values match the analytic formula") {
    CHECK(bench::eval_c2(Eigen::VectorXd::Zero(100)) == doctest::Approx(41898.29).epsilon(1e-12));
    // Frozen from an independent evaluation of the Schwefel sum.
    CHECK(bench::eval_c2(Eigen::VectorXd::Constant(100, 420.9687)) ==
          doctest::Approx(0.0012727837238344364).epsilon(1e-9));
    CHECK(bench::eval_c2(Eigen::VectorXd::Constant(100, 420.9687)) < 0.01);
    Eigen::VectorXd x2(2);
    x2 << 0.0, 420.9687;
    CHECK(bench::eval_c2(x2) == doctest::Approx(418.98291272783746).epsilon(1e-12));
}

TEST_CASE("c3 values match the printed formula") {
    CHECK(bench::eval_c3(Eigen::VectorXd::Constant(100, -1.0)) ==
          doctest::Approx(0.0).epsilon(1e-30));
    CHECK(bench::eval_c3(Eigen::VectorXd::Constant(100, -5.0)) ==
          doctest::Approx(3.1101767270538954).epsilon(1e-14));
    // u component alone at n=1, x=12: 100 * max(0, 2)^4.
    Eigen::VectorXd x1(1);
    x1 << 12.0;
    const double y = (12.0 + 5.0) / 4.0;
    const double first = 10.0 * std::pow(std::sin(std::numbers::pi * y), 2);
    CHECK(bench::eval_c3(x1) == doctest::Approx(std::numbers::pi * first).epsilon(1e-12));
}

TEST_CASE("c4 values match direct scalar evaluation") {
    CHECK(bench::eval_c4(Eigen::VectorXd::Zero(100)) == doctest::Approx(0.0));
    Eigen::VectorXd x1(1);
    x1 << 100.0;
    CHECK(bench::eval_c4(x1) == doctest::Approx(2.637681127712316).epsilon(1e-14));
    Eigen::VectorXd x2(2);
    x2 << 0.0, 500.0;
    CHECK(bench::eval_c4(x2) == doctest::Approx(63.62389786839842).epsilon(1e-14));
}

TEST_CASE("c1 instance construction respects every invariant") {
    bench::C1Instance inst = bench::build_c1_instance(42, 100, 5, 1000, 0.5);
    CHECK(inst.zeta.row(0).isConstant(0.1));
    CHECK(inst.zeta.cwiseAbs().maxCoeff() <= 1.0);
    CHECK((inst.rotation.transpose() * inst.rotation -
           Eigen::MatrixXd::Identity(100, 100)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(inst.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(inst.minima.maxCoeff() <= 1.0);
    CHECK(inst.minima.minCoeff() >= -1.0);
    CHECK(inst.c0.size() == 999);
    CHECK(inst.c0.minCoeff() >= 1.0);
    CHECK(inst.c0.maxCoeff() <= 2.0);
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 1; i < inst.num_minima; ++i)
        sep = std::min(sep, (inst.minima.row(i) - inst.minima.row(0)).norm());
    CHECK(sep > inst.basin_radius);
}

TEST_CASE("c1 instance construction is deterministic per seed") {
    bench::C1Instance a = bench::build_c1_instance(7, 30, 4, 60, 0.4);
    bench::C1Instance b = bench::build_c1_instance(7, 30, 4, 60, 0.4);
    CHECK(a.minima.cwiseEqual(b.minima).all());
    CHECK(a.zeta.cwiseEqual(b.zeta).all());
    CHECK(a.rotation.cwiseEqual(b.rotation).all());
    CHECK(a.c0.cwiseEqual(b.c0).all());
    bench::C1Instance c = bench::build_c1_instance(8, 30, 4, 60, 0.4);
    CHECK_FALSE(a.minima.cwiseEqual(c.minima).all());
}

TEST_CASE("planted map keeps points inside the box even with identity rotation and M=n") {
    RngStream rng(3);
    const int n = 12;
    Eigen::MatrixXd zeta(40, n);
    for (int i = 0; i < zeta.rows(); ++i)
        for (int j = 0; j < n; ++j) zeta(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd mapped = bench::apply_planted_map(zeta, Eigen::MatrixXd::Identity(n, n), n);
    CHECK(mapped.maxCoeff() <= 1.0);
    CHECK(mapped.minCoeff() >= -1.0);
    // With identity rotation the map reduces to g(0.9 tanh(z)/colmax) with
    // g(t) = t + (1 - t^2)/10; spot-check one entry against that closed form.
    Eigen::MatrixXd x2 = zeta.array().tanh();
    const double t = 0.9 * x2(5, 3) / x2.col(3).cwiseAbs().maxCoeff();
    CHECK(mapped(5, 3) == doctest::Approx(t + 0.1 * (1 - t * t)).epsilon(1e-14));
}

TEST_CASE("basin separation failure is reported") {
    // Radius far larger than the box diagonal cannot be satisfied.
    CHECK_THROWS_AS(bench::build_c1_instance(1, 10, 2, 50, 50.0), std::runtime_error);
}

TEST_CASE("c1 evaluation hits the planted values") {
    bench::C1Instance inst = small_instance();
    CHECK(bench::eval_c1(inst, inst.minima.row(0).transpose()) == doctest::Approx(0.0));
    for (int i : {1, 7, 25}) {
        const double sep = (inst.minima.row(i) - inst.minima.row(0)).norm();
        REQUIRE(sep > inst.basin_radius);
        CHECK(bench::eval_c1(inst, inst.minima.row(i).transpose()) ==
              doctest::Approx(inst.c0(i - 1)).epsilon(1e-9));
    }
}

TEST_CASE("c1 evaluation matches the independent factor-by-factor reference") {
    bench::C1Instance inst = small_instance(11);
    RngStream rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd x(inst.n);
        for (int j = 0; j < inst.n; ++j) x(j) = rng.uniform(-1.0, 1.0);
        CHECK(bench::eval_c1(inst, x) == doctest::Approx(c1_reference(inst, x)).epsilon(1e-12));
    }
    // Midpoint between the two nearest tail minima.
    Eigen::VectorXd mid = 0.5 * (inst.minima.row(1) + inst.minima.row(2)).transpose();
    CHECK(bench::eval_c1(inst, mid) == doctest::Approx(c1_reference(inst, mid)).epsilon(1e-12));
}

TEST_CASE("c1 is nonnegative and the tail minima cost at least 1") {
    bench::C1Instance inst = small_instance(13);
    RngStream rng(17);
    for (int trial = 0; trial < 10000; ++trial) {
        Eigen::VectorXd x(inst.n);
        for (int j = 0; j < inst.n; ++j) x(j) = rng.uniform(-1.0, 1.0);
        CHECK(bench::eval_c1(inst, x) >= 0.0);
    }
    for (int i = 1; i < inst.num_minima; ++i) {
        if ((inst.minima.row(i) - inst.minima.row(0)).norm() >= inst.basin_radius)
            CHECK(bench::eval_c1(inst, inst.minima.row(i).transpose()) >= 1.0 - 1e-9);
    }
}

TEST_CASE("c2, c3, c4 are nonnegative over their domains") {
    RngStream rng(23);
    for (int trial = 0; trial < 10000; ++trial) {
        Eigen::VectorXd x(20);
        for (int j = 0; j < 20; ++j) x(j) = rng.uniform(-500.0, 500.0);
        CHECK(bench::eval_c2(x) >= 0.0);
        CHECK(bench::eval_c4(x) >= 0.0);
        Eigen::VectorXd x3 = x * 0.1;  // [-50, 50]
        CHECK(bench::eval_c3(x3) >= 0.0);
    }
}

TEST_CASE("gradients match central finite differences at random smooth points") {
    auto c1_inst = std::make_shared<bench::C1Instance>(small_instance(29));
    struct Case {
        bench::Problem problem;
        double fd_h;
    };
    std::vector<Case> cases;
    cases.push_back({bench::make_c1_problem(c1_inst), 1e-5 * 2.0});
    cases.push_back({bench::make_problem(bench::ProblemId::C2, 15), 1e-5 * 1000.0});
    cases.push_back({bench::make_problem(bench::ProblemId::C3, 15), 1e-5 * 100.0});
    cases.push_back({bench::make_problem(bench::ProblemId::C4, 15), 1e-5 * 1000.0});

    RngStream rng(31);
    for (const auto& c : cases) {
        auto f = [&](const Eigen::VectorXd& x) { return c.problem.value(x); };
        int checked = 0;
        while (checked < 20) {
            Eigen::VectorXd x(c.problem.n);
            for (int j = 0; j < c.problem.n; ++j)
                x(j) = rng.uniform(0.9 * c.problem.lower(j), 0.9 * c.problem.upper(j));
            // Keep away from the nonsmooth sets of c2 (origin) and c3 (|x|=10).
            if (c.problem.id == bench::ProblemId::C2 && x.cwiseAbs().minCoeff() < 1.0) continue;
            if (c.problem.id == bench::ProblemId::C3 &&
                (x.cwiseAbs().array() - 10.0).abs().minCoeff() < 0.1)
                continue;
            Eigen::VectorXd fd = oracles::finite_difference_gradient(f, x, c.fd_h);
            Eigen::VectorXd an = c.problem.gradient(x);
            CHECK(oracles::relative_error(an, fd) < 1e-5);
            ++checked;
        }
    }
}

TEST_CASE("subgradient conventions at the stationary special points") {
    bench::Problem c2 = bench::make_problem(bench::ProblemId::C2, 6);
    CHECK(c2.gradient(Eigen::VectorXd::Zero(6)).cwiseAbs().maxCoeff() == 0.0);
    bench::Problem c4 = bench::make_problem(bench::ProblemId::C4, 6);
    CHECK(c4.gradient(Eigen::VectorXd::Zero(6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("problem construction validates arguments") {
    CHECK_THROWS(bench::make_problem(bench::ProblemId::C1, 10));
    CHECK_THROWS(bench::make_problem(bench::ProblemId::C2, 0));
    CHECK_THROWS(bench::build_c1_instance(1, 10, 11, 50, 0.5));
    CHECK_THROWS(bench::build_c1_instance(1, 10, 5, 1, 0.5));
    CHECK_THROWS(bench::build_c1_instance(1, 10, 5, 50, -1.0));
}
