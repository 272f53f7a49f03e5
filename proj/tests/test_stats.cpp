#include "isoglot/stats.hpp"
#include "isoglot/common.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace isoglot;

TEST_SUITE("stats") {

TEST_CASE("incomplete beta edge values") {
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(1, 1) is the identity.
    CHECK(regularized_incomplete_beta(1, 1, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(1, 1, 0.75) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("incomplete beta symmetry") {
    // I_x(a, b) = 1 - I_{1-x}(b, a)
    const double cases[][3] = {{2, 5, 0.3}, {0.5, 0.5, 0.7}, {10, 3, 0.9}, {4, 4, 0.5}};
    for (const auto& c : cases) {
        double lhs = regularized_incomplete_beta(c[0], c[1], c[2]);
        double rhs = 1.0 - regularized_incomplete_beta(c[1], c[0], 1.0 - c[2]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
    CHECK(regularized_incomplete_beta(4, 4, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("incomplete beta closed forms") {
    // I_x(1, b) = 1 - (1-x)^b and I_x(a, 1) = x^a.
    CHECK(regularized_incomplete_beta(1, 4, 0.2) ==
          doctest::Approx(1.0 - std::pow(0.8, 4)).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(3, 1, 0.6) == doctest::Approx(std::pow(0.6, 3)).epsilon(1e-14));
}

TEST_CASE("incomplete beta rejects bad arguments") {
    CHECK_THROWS_AS(regularized_incomplete_beta(0, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularized_incomplete_beta(1, -2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, 1.1), std::invalid_argument);
}

TEST_CASE("student t cdf against reference values") {
    // Reference values computed with 50-digit arithmetic, then rounded to
    // double. The implementation should agree to about 1e-10 absolute.
    struct Row { double t, nu, cdf; };
    const Row rows[] = {
        {2.0, 10, 0.96330598261462982},
        {1.0, 5, 0.81839126617543869},
        {2.228138851986273, 10, 0.975},
        {0.5, 3, 0.6742760175759245},
        {3.0, 30, 0.99730501796717403},
        {-1.5, 7, 0.088649243494985017},
        {1.812461122811676, 10, 0.95},
        {2.7764451051977987, 4, 0.975},
        {0.0, 12, 0.5},
        {4.0, 2, 0.97140452079103168},
    };
    for (const auto& r : rows)
        CHECK(student_t_cdf(r.t, r.nu) == doctest::Approx(r.cdf).epsilon(1e-10));
}

TEST_CASE("student t cdf is symmetric about zero") {
    for (double t : {0.3, 1.0, 2.5, 7.0})
        for (double nu : {1.0, 4.0, 25.0})
            CHECK(student_t_cdf(t, nu) + student_t_cdf(-t, nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("student t p-value matches both tails") {
    for (double t : {0.5, 1.5, 3.0})
        for (double nu : {2.0, 8.0, 40.0}) {
            double two_sided = student_t_pvalue(t, nu);
            double from_cdf = 2.0 * (1.0 - student_t_cdf(std::abs(t), nu));
            CHECK(two_sided == doctest::Approx(from_cdf).epsilon(1e-10));
            CHECK(student_t_pvalue(-t, nu) == doctest::Approx(two_sided).epsilon(1e-12));
        }
    CHECK(student_t_pvalue(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("pearson on hand-checked vectors") {
    CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(pearson({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pearson is invariant under positive affine maps") {
    std::vector<double> x = {0.3, 1.7, 2.2, 5.9, 4.1, 3.3};
    std::vector<double> y = {2.5, 1.1, 4.4, 3.9, 0.8, 2.0};
    double base = pearson(x, y);
    std::vector<double> xs(x.size()), ys(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xs[i] = 3.0 * x[i] + 10.0;
        ys[i] = 0.25 * y[i] - 2.0;
    }
    CHECK(pearson(xs, ys) == doctest::Approx(base).epsilon(1e-12));
    // Flipping one side's sign flips the correlation.
    for (auto& v : ys) v = -v;
    CHECK(pearson(xs, ys) == doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("pearson stays inside [-1, 1]") {
    // Near-collinear data can push the raw ratio past 1 by round-off.
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(1e8 + i * 1e-4);
        y.push_back(2e8 + i * 2e-4);
    }
    double r = pearson(x, y);
    CHECK(r <= 1.0);
    CHECK(r >= -1.0);
}

TEST_CASE("pearson input validation") {
    CHECK_THROWS_AS(pearson({1, 2}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1, 2, 3}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), compute_error);
    CHECK_THROWS_AS(pearson({1, 2, 3}, {4, 4, 4}), compute_error);
}

TEST_CASE("log transform") {
    auto out = log_transform({1.0, std::exp(1.0), 4.0});
    CHECK(out[0] == doctest::Approx(0.0));
    CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out[2] == doctest::Approx(1.3862943611198906).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(log_transform({2.0, 0.0, 1.0}), doctest::Contains("index 1"), compute_error);
    CHECK_THROWS_AS(log_transform({-3.0}), compute_error);
}

} // TEST_SUITE
