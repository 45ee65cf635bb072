#include "polypin/errors.hpp"
#include "polypin/free_energy.hpp"
#include "polypin/srw_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <tuple>

using namespace polypin;

namespace {
// Truncated numeric Laplace sum from the exact hitting law, with a crude geometric tail bound.
double laplace_numeric(long T, double lambda, long H) {
    const auto law = hitting_law(InterfaceSpec::finite(T), H);
    double s = 0.0;
    for (long n = 2; n <= H; n += 2) s += law.q_at(n) * std::exp(-lambda * static_cast<double>(n));
    return s;
}
} // namespace

TEST_CASE("laplace_Q closed form") {
    for (long T : {2L, 4L, 10L, 100L}) CHECK(laplace_Q(T, 0.0) == 1.0);
    for (double lam : {-0.1, -0.3}) CHECK(laplace_Q(2, lam) == doctest::Approx(std::exp(-2 * lam)).epsilon(1e-14));
    CHECK(std::fabs(laplace_Q(4, -0.05) - laplace_numeric(4, -0.05, 4000)) <= 1e-10);
    for (long T : {6L, 20L})
        for (double lam : {-0.01, 0.0, 0.02, 0.5})
            CHECK(std::fabs(laplace_Q(T, lam) - laplace_numeric(T, lam, 20000)) <= 1e-10);
    // eps = +1 part
    const auto law = hitting_law(InterfaceSpec::finite(10), 20000);
    double s1 = 0.0;
    for (long n = 2; n <= 20000; n += 2) s1 += law.q1_at(n) * std::exp(0.01 * static_cast<double>(n));
    CHECK(laplace_Q1(10, -0.01) == doctest::Approx(s1).epsilon(1e-10));
}

TEST_CASE("laplace_Q domain error past the pole") {
    const double boundary = std::log(std::cos(std::numbers::pi / 4));
    try {
        laplace_Q(4, boundary - 0.01);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(e.boundary() == doctest::Approx(boundary));
    }
}

TEST_CASE("free energy: spec examples") {
    const auto zero = free_energy({40, 0.0});
    CHECK(zero.phi == 0.0);
    CHECK(zero.gamma == 0.0);
    for (double d : {1e-3, 0.1, 1.0, 5.0}) CHECK(std::fabs(free_energy({2, d}).phi + d / 2) <= 1e-12 * d + 1e-300);
    const auto fe = free_energy({40, 0.1});
    CHECK(std::fabs(laplace_sum_dp(40, fe.phi) - std::exp(0.1)) <= 1e-8);
}

TEST_CASE("free energy invariants") {
    for (long T : {4L, 10L, 64L, 200L}) {
        double prev = 0.0;
        for (double d : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0}) {
            const auto r = free_energy({T, d});
            CHECK(r.phi < prev); // strictly decreasing in delta
            prev = r.phi;
            CHECK(r.gamma > 0.0);
            CHECK(r.gamma < std::numbers::pi / static_cast<double>(T));
            CHECK(r.g + r.phi > 0.0);
            // consistency triangle
            CHECK(std::atan(std::sqrt(std::expm1(-2 * r.phi))) == doctest::Approx(r.gamma).epsilon(1e-12));
            CHECK(1.0 + std::tan(r.gamma) * std::tan(T * r.gamma / 2) == doctest::Approx(std::exp(d)).epsilon(1e-11));
            CHECK(r.iterations <= 200);
        }
    }
}

TEST_CASE("x_beta and kappa") {
    CHECK(std::fabs(x_beta(1e6) - std::numbers::pi) < 1e-3);
    CHECK(x_beta(1.0) == doctest::Approx(1.307).epsilon(0.001 / 1.307));
    CHECK(std::fabs(kappa(1e-6) - 1.0) < 1e-3);
    CHECK(kappa(1.0) == doctest::Approx(0.99).epsilon(0.01));
    double prev = 2.0;
    for (double lb = -3; lb <= 3.0001; lb += 0.05) {
        const double k = kappa(std::pow(10.0, lb));
        CHECK(k < prev);
        prev = k;
    }
    CHECK(kappa(1e6) < 0.01);
    CHECK_THROWS_AS(x_beta(0.0), ParameterError);
}

TEST_CASE("asymptotic phi: error decays along N") {
    auto pt = [](const char* a, const char* b, long N) {
        return ScalingPoint{Exponent::parse(a), Exponent::parse(b), 1.0, N};
    };
    {
        const auto hi = asymptotic_phi(pt("0.2", "0.4", 1000000));
        const auto lo = asymptotic_phi(pt("0.2", "0.4", 10000));
        CHECK(hi.branch == PhiBranch::a_less_b);
        CHECK(hi.rel_error < lo.rel_error);
    }
    for (auto [a, b, br] : {std::tuple<const char*, const char*, PhiBranch>{"0.3", "0.3", PhiBranch::a_equals_b},
                            std::tuple<const char*, const char*, PhiBranch>{"0.4", "0.1", PhiBranch::a_greater_b}}) {
        double prev = 1e9;
        for (long N : {1000L, 10000L, 100000L, 1000000L}) {
            const auto r = asymptotic_phi(pt(a, b, N));
            CHECK(r.branch == br);
            CHECK(r.rel_error < prev);
            prev = r.rel_error;
        }
    }
}

TEST_CASE("renewal moments: examples and method agreement") {
    const auto m2 = renewal_moments({2, 0.7}, MomentMethod::closed_form);
    CHECK(m2.mean_tau == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m2.switch_prob == doctest::Approx(0.5).epsilon(1e-12));
    const auto d2 = renewal_moments({2, 0.7}, MomentMethod::direct_sum);
    CHECK(d2.mean_tau == doctest::Approx(2.0).epsilon(1e-12));

    // E[tau_1] 2 pi^2 / (T^3 delta^2) -> 1 needs delta -> 0 and T delta -> oo; the correction is
    // of order 1/(T delta) + delta, still 12% at (T, delta) = (100, 0.5). Follow the ray delta = 5/sqrt(T).
    double prev_gap = 1e9;
    for (long T : {100L, 400L, 1600L, 6400L, 25600L}) {
        const double d = 5.0 / std::sqrt(static_cast<double>(T));
        const auto m = renewal_moments({T, d}, T <= 100 ? MomentMethod::direct_sum : MomentMethod::closed_form);
        const double ratio = m.mean_tau * 2 * std::numbers::pi * std::numbers::pi / (std::pow(T, 3.0) * d * d);
        CHECK(ratio > 1.0);
        CHECK(ratio - 1.0 < prev_gap);
        prev_gap = ratio - 1.0;
    }
    CHECK(prev_gap < 0.01);
    const auto b = renewal_moments({100, 0.001}, MomentMethod::direct_sum);
    CHECK(b.mean_tau / 100 >= 0.9);
    CHECK(b.mean_tau / 100 <= 1.1);

    // closed form vs direct sum on a T delta grid in [0.01, 100]
    for (long T : {10L, 40L, 100L}) {
        for (double td : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double d = td / static_cast<double>(T);
            if (d > 5) continue;
            const auto c = renewal_moments({T, d}, MomentMethod::closed_form);
            const auto s = renewal_moments({T, d}, MomentMethod::direct_sum);
            CHECK(c.mean_tau == doctest::Approx(s.mean_tau).epsilon(1e-6));
            CHECK(c.second_tau == doctest::Approx(s.second_tau).epsilon(1e-6));
            CHECK(c.switch_prob == doctest::Approx(s.switch_prob).epsilon(1e-6));
            CHECK(c.second_tau >= c.mean_tau * c.mean_tau);
            CHECK(c.mean_tau >= 2.0);
            CHECK(c.switch_prob >= 0.0);
            CHECK(c.switch_prob <= 1.0);
        }
    }
}
