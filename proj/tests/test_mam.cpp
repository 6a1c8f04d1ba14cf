#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hdinfer/mam.hpp"

using namespace hdinfer;
using mam::MamProblem;

namespace {

MamProblem constant_problem(std::size_t n, std::size_t p, double z) {
    MamProblem prob;
    prob.theta_hat.assign(p, 0.0);
    prob.influence = Matrix(n, p, z);
    return prob;
}

}  // namespace

TEST_CASE("t statistics formula and equivariance") {
    MamProblem prob = constant_problem(4, 2, 2.0);  // E_n[Z^2] = 4, scale = 2
    prob.theta_hat = {1.0, 0.5};
    const auto t = mam::t_statistics(prob, {0.0, 0.0});
    CHECK(t.values[0] == doctest::Approx(1.0));   // 2 * 1 / 2
    CHECK(t.values[1] == doctest::Approx(0.5));
    CHECK(t.scale[0] == doctest::Approx(2.0));

    // Zero numerator.
    const auto t0 = mam::t_statistics(prob, prob.theta_hat);
    CHECK(t0.values[0] == doctest::Approx(0.0));
    CHECK(t0.values[1] == doctest::Approx(0.0));

    // Shifting nulls by delta shifts t by -sqrt(n) delta / scale.
    const auto ts = mam::t_statistics(prob, {0.5, 0.0});
    CHECK(ts.values[0] == doctest::Approx(t.values[0] - 2.0 * 0.5 / 2.0));

    // Scaling column j of Z by c divides t_j by c.
    MamProblem scaled = prob;
    for (std::size_t i = 0; i < 4; ++i) scaled.influence(i, 0) *= 3.0;
    const auto tc = mam::t_statistics(scaled, {0.0, 0.0});
    CHECK(tc.values[0] == doctest::Approx(t.values[0] / 3.0));
    CHECK(tc.values[1] == doctest::Approx(t.values[1]));
}

TEST_CASE("degenerate columns are hard errors naming the column") {
    MamProblem prob = constant_problem(3, 3, 1.0);
    for (std::size_t i = 0; i < 3; ++i) prob.influence(i, 1) = 0.0;
    try {
        mam::t_statistics(prob, {0.0, 0.0, 0.0});
        FAIL("expected degenerate-column error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
}

TEST_CASE("problem validation") {
    MamProblem bad;
    bad.theta_hat = {1.0};
    bad.influence = Matrix(1, 1, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // n < 2
    bad.influence = Matrix(3, 2, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // p mismatch
}

TEST_CASE("moderate deviation critical values") {
    CHECK(mam::moderate_deviation_critical(1, 0.05) ==
          doctest::Approx(1.6448536269514722).epsilon(1e-9));
    CHECK(mam::moderate_deviation_critical(100, 0.05) ==
          doctest::Approx(3.2905267314919255).epsilon(1e-8));
    CHECK(mam::moderate_deviation_critical(1, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    // Strictly increasing in p, decreasing in alpha.
    CHECK(mam::moderate_deviation_critical(10, 0.05) >
          mam::moderate_deviation_critical(5, 0.05));
    CHECK(mam::moderate_deviation_critical(10, 0.01) >
          mam::moderate_deviation_critical(10, 0.05));
    CHECK_THROWS_AS(mam::moderate_deviation_critical(0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(mam::moderate_deviation_critical(10, 0.0), std::invalid_argument);
}

TEST_CASE("maximal diagnostic") {
    MamProblem prob = constant_problem(100, 100, 1.0);  // all t = 0 at theta_hat = 0
    const auto d = mam::maximal_diagnostic(prob);
    CHECK(d.max_abs_t == doctest::Approx(0.0));
    CHECK(d.threshold == doctest::Approx(std::sqrt(2.0 * std::log(1e4))).epsilon(1e-12));
    CHECK(d.threshold == doctest::Approx(4.291932).epsilon(1e-5));
}

TEST_CASE("condition M diagnostics") {
    MamProblem ones = constant_problem(5, 2, 1.0);
    auto rep = mam::condition_m_diagnostics(ones);
    CHECK(rep.min_second_moment == doctest::Approx(1.0));
    CHECK(rep.max_abs_third_moment == doctest::Approx(1.0));
    CHECK(rep.max_fourth_moment == doctest::Approx(1.0));

    // Rademacher column: even moments 1.
    MamProblem rad = constant_problem(4, 1, 1.0);
    rad.influence(1, 0) = -1.0;
    rad.influence(3, 0) = -1.0;
    rep = mam::condition_m_diagnostics(rad);
    CHECK(rep.min_second_moment == doctest::Approx(1.0));
    CHECK(rep.max_fourth_moment == doctest::Approx(1.0));

    // Homogeneity: scaling Z by 2 multiplies moments by 4, 8, 16.
    MamProblem twice = constant_problem(5, 2, 2.0);
    rep = mam::condition_m_diagnostics(twice);
    CHECK(rep.min_second_moment == doctest::Approx(4.0));
    CHECK(rep.max_abs_third_moment == doctest::Approx(8.0));
    CHECK(rep.max_fourth_moment == doctest::Approx(16.0));
}
