#include "helpers.hpp"

#include "mocsim/errors.hpp"
#include "mocsim/links.hpp"
#include "mocsim/reliability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mocsim;

namespace {

// Inclusion-exclusion form of the parallel system, written out term by term.
double expansion(double lambda, int n)
{
    double r = 0;
    double binom = 1;
    for (int k = 1; k <= n; ++k) {
        binom = binom * (n - k + 1) / k;
        r += (k % 2 == 1 ? 1.0 : -1.0) * binom * std::exp(-k * lambda);
    }
    return r;
}

// Composite Simpson of the survival function over [0, 60/lambda].
double mttf_quadrature(double lambda, int n)
{
    const double upper = 60.0 / lambda;
    const int steps = 200000;
    const double h = upper / steps;
    auto rel = [&](double t) { return 1.0 - std::pow(-std::expm1(-lambda * t), n); };
    double s = rel(0) + rel(upper);
    for (int i = 1; i < steps; ++i) s += rel(i * h) * (i % 2 == 1 ? 4 : 2);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("congestion hazard and weibull density")
{
    HazardParams hp{0.001, 0.0};
    CHECK(hazard_congestion(10, hp) == doctest::Approx(0.01));
    HazardParams damped{1.0, 0.5};
    CHECK(hazard_congestion(1, damped) == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK_THROWS_AS(hazard_congestion(1, HazardParams{0.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(hazard_congestion(1, HazardParams{1.0, 1.0}), ContractViolation);

    WeibullParams exp1{1, 1};
    CHECK(weibull_availability(1, exp1) == doctest::Approx(0.3678794412).epsilon(1e-9));
    CHECK_THROWS_AS(weibull_availability(0, WeibullParams{0.5, 1}), DomainError);
    CHECK(weibull_availability(0, WeibullParams{2, 1}) == 0.0);
    CHECK(weibull_cumulative_hazard(2, WeibullParams{2, 2}) == doctest::Approx(1.0));
    CHECK(weibull_hazard(3, WeibullParams{1, 4}) == doctest::Approx(0.25));
}

TEST_CASE("weibull density integrates to one")
{
    // beta = 2, eta = 1: mass beyond t = 10 is exp(-100)
    HazardParams negligible{1e-300, 0.0};
    const auto cf = cumulative_failure(negligible, WeibullParams{2, 1}, 10.0, 1e-4);
    CHECK(std::abs(cf.raw - 1.0) < 1e-6);
}

TEST_CASE("cumulative failure of the congestion hazard alone")
{
    // integral of 0.001 t over [0, 10] = 0.05; trapezoid is exact for a line
    const auto cf = cumulative_failure(HazardParams{0.001, 0.0}, WeibullParams{1, 1e300}, 10.0, 0.3);
    CHECK(cf.raw == doctest::Approx(0.05).epsilon(1e-9));
    CHECK_FALSE(cf.clamped);

    const auto big = cumulative_failure(HazardParams{1.0, 0.0}, WeibullParams{1, 1e300}, 10.0, 1.0);
    CHECK(big.clamped);
    CHECK(big.lambda == 1.0);
    CHECK(big.raw == doctest::Approx(50.0));

    CHECK_THROWS_AS(cumulative_failure({}, {}, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(cumulative_failure({}, {}, 1.0, 2.0), DomainError);
}

TEST_CASE("performance constrained reliability")
{
    CHECK(performance_constrained_q(true, 0.7) == 0.7);
    CHECK(performance_constrained_q(false, 0.7) == 0.0);
    CHECK_THROWS_AS(performance_constrained_q(true, 1.5), DomainError);
    CHECK(linear_reliability(0.3) == doctest::Approx(0.7));
    CHECK(linear_reliability(2.0) == 0.0);
}

TEST_CASE("parallel reliability matches the expansion and frozen values")
{
    for (int n = 1; n <= 4; ++n) {
        for (int i = 0; i <= 1000; ++i) {
            const double lambda = i / 1000.0;
            CHECK(std::abs(parallel_reliability({lambda, n}) - expansion(lambda, n)) < 1e-12);
        }
    }
    CHECK(parallel_reliability({0.21, 1}) == doctest::Approx(0.81058).epsilon(1e-5));
    CHECK(parallel_reliability({0.21, 4}) == doctest::Approx(0.998713).epsilon(1e-6));
    CHECK(parallel_reliability({0.0, 3}) == 1.0);
    CHECK_THROWS_AS(parallel_reliability({-0.1, 1}), ContractViolation);
    CHECK_THROWS_AS(parallel_reliability({0.1, 0}), ContractViolation);
}

TEST_CASE("mttf is the harmonic number over lambda")
{
    CHECK(mttf({1.0, 3}) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(mttf({2.0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::isinf(mttf({0.0, 2})));
    const double expected[] = {1.0, 1.5, 11.0 / 6.0, 25.0 / 12.0};
    for (int n = 1; n <= 4; ++n) {
        CHECK(std::abs(mttf({0.5, n}) * 0.5 - expected[n - 1]) < 1e-12);
    }
    for (double lambda : {0.02, 0.21}) {
        const double q = mttf_quadrature(lambda, 4);
        CHECK(std::abs(q - mttf({lambda, 4})) / mttf({lambda, 4}) < 1e-3);
        CHECK(q * lambda == doctest::Approx(25.0 / 12.0).epsilon(1e-3));
    }
}

TEST_CASE("redundancy curves")
{
    const auto rows = redundancy_curves({0.02, 0.21}, 4);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].lambda == 0.02);
    CHECK(rows[0].n == 1);
    CHECK(rows[7].n == 4);
    CHECK(rows[3].mttf_times_lambda == doctest::Approx(25.0 / 12.0));
    CHECK_THROWS_AS(redundancy_curves({0.0}, 2), DomainError);
    CHECK_THROWS_AS(redundancy_curves({}, 2), ContractViolation);
}

TEST_CASE("empirical reliability of a small trace")
{
    Thresholds th;
    auto tr = testutil::trace("A", {50.0, 150.0, std::nullopt, 90.0, 12000.0, 100.0});
    CHECK(empirical_r_s(tr, th) == doctest::Approx(4.0 / 6.0));
    CHECK(empirical_q_s(tr, th, Metric::Rtt) == doctest::Approx(3.0 / 6.0));
    CHECK_THROWS_AS(empirical_q_s(tr, th, Metric::Downlink), MissingMetric);
    // up: 1 1 0 1 0 1 -> 4 up ticks, 2 failures
    CHECK(*empirical_mttf_ms(tr, th) == doctest::Approx(4.0 * 3000 / 2));
    CHECK_FALSE(empirical_mttf_ms(testutil::trace("B", {1.0, 2.0}), th).has_value());

    const auto rep = report_for_trace(tr, th);
    CHECK(rep.q_s.count(Metric::Rtt) == 1);
    CHECK(rep.q_s.count(Metric::Downlink) == 0);
}

TEST_CASE("combined providers meet the threshold on any network")
{
    Thresholds th;
    auto a = testutil::trace("A", {50.0, 150.0, std::nullopt, 150.0});
    auto b = testutil::trace("B", {150.0, 60.0, std::nullopt, 150.0});
    CHECK(dsm_q_s(std::vector<LinkTrace>{a, b}, th, Metric::Rtt) == doctest::Approx(0.5));
    auto shifted = testutil::trace("C", {1.0, 1.0, 1.0, 1.0}, 3000, 1);
    CHECK_THROWS_AS(dsm_q_s(std::vector<LinkTrace>{a, shifted}, th, Metric::Rtt), AlignmentError);
}

TEST_CASE("dsm q_s is at least the per-tick minimum construction bound")
{
    std::mt19937_64 rng(7);
    Thresholds th;
    for (int iter = 0; iter < 50; ++iter) {
        auto a = testutil::random_trace(rng, "A", 60);
        auto b = testutil::random_trace(rng, "B", 60);
        // recompute from the per-tick minimum RTT
        std::size_t ok = 0;
        for (std::size_t k = 0; k < 60; ++k) {
            const double best = std::min(a.samples[k].rtt.ms_or(1e9), b.samples[k].rtt.ms_or(1e9));
            if (best <= th.rtt_ms) ++ok;
        }
        const double q = dsm_q_s(std::vector<LinkTrace>{a, b}, th, Metric::Rtt);
        CHECK(q == doctest::Approx(ok / 60.0));
    }
}

TEST_CASE("empirical q_s never exceeds r_s")
{
    std::mt19937_64 rng(11);
    Thresholds th;
    for (int i = 0; i < 200; ++i) {
        auto tr = testutil::random_trace(rng, "A", 100);
        CHECK(empirical_q_s(tr, th, Metric::Rtt) <= empirical_r_s(tr, th));
    }
}
