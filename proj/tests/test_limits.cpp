#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "gwleaf/exactlaw.hpp"
#include "gwleaf/limits.hpp"
#include "gwleaf/offspring.hpp"
#include "gwleaf/pmf.hpp"
#include "gwleaf/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gwleaf;

namespace {

template <class F>
double integrate(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-11);
}

std::vector<double> lattice_three() {
    const double b = 0.1;
    const double c = (1.0 - 4.0 * b) / 7.0;
    std::vector<double> m(8, 0.0);
    m[0] = 1.0 - b - c;
    m[4] = b;
    m[7] = c;
    return m;
}

// Integral of q_s(x) over s in [lo, inf), with s = 1/t^2.
double first_passage_direct(double theta, double lo, double x) {
    auto f = [&](double t) {
        // leading term of the integrand as t -> 0
        if (t < 1e-8) return 2.0 * x * stable_density(theta, 0.0) * std::pow(t, 2.0 / theta - 1.0);
        return first_passage_density(theta, 1.0 / (t * t), x) * 2.0 / (t * t * t);
    };
    return boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, 1.0 / std::sqrt(lo), 1e-12);
}

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("Gaussian case in closed form") {
    CHECK(stable_density(2.0, 0.0) == doctest::Approx(0.2820947918).epsilon(1e-10));
    CHECK(stable_density(2.0, 2.0) == doctest::Approx(std::exp(-1.0) / std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(stable_cdf(2.0, 0.0) == doctest::Approx(0.5));
    CHECK(stable_median(2.0) == 0.0);
}

TEST_CASE("inversion reproduces the Gaussian case") {
    double worst = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.25)
        worst = std::max(worst, std::abs(stable_density_by_inversion(2.0, x) - stable_density(2.0, x)));
    CHECK(worst < 1e-6);
}

TEST_CASE("inversion against the power series") {
    for (double theta : {1.2, 1.5, 1.8}) {
        for (double x : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
            INFO("theta=", theta, " x=", x);
            CHECK(stable_density(theta, x) == doctest::Approx(oracle::stable_density_series(theta, x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("total mass is one") {
    for (double theta : {1.2, 1.5, 1.8, 2.0}) {
        // The left tail is lighter than Gaussian; the right tail uses its expansion.
        const double cut = theta < 1.4 ? 20.0 : 10.0;
        const double body = integrate([&](double x) { return stable_density(theta, x); }, -12.0, 0.0) +
                            integrate([&](double x) { return stable_density(theta, x); }, 0.0, cut);
        const double tail = theta == 2.0 ? 0.5 * std::erfc(cut / 2.0) : oracle::stable_survival_tail(theta, cut);
        INFO("theta=", theta);
        CHECK(std::abs(body + tail - 1.0) < 1e-5);
    }
}

TEST_CASE("distribution function and median") {
    for (double theta : {1.2, 1.5, 1.8}) {
        const double m = stable_median(theta);
        CHECK(stable_cdf(theta, m) == doctest::Approx(0.5).epsilon(1e-8));
        // Spectrally positive with mean zero: the median is below zero.
        CHECK(m < 0.0);
        const double direct = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double x) { return stable_density(theta, x); }, -8.0, 0.7, 6, 1e-10);
        CHECK(stable_cdf(theta, 0.7) == doctest::Approx(direct).epsilon(1e-7));
    }
}

TEST_CASE("scaling rule") {
    for (double theta : {1.5, 2.0})
        for (double s : {0.3, 1.0, 4.0})
            for (double x : {-1.0, 0.0, 0.8})
                CHECK(stable_density_at(theta, s, x) ==
                      doctest::Approx(std::pow(s, -1.0 / theta) * stable_density(theta, x * std::pow(s, -1.0 / theta))));
    CHECK(error_of([] { stable_density_at(1.5, 0.0, 1.0); }) == Errc::DomainError);
    CHECK(error_of([] { stable_density(1.0, 0.0); }) == Errc::DomainError);
    CHECK(error_of([] { stable_density(2.5, 0.0); }) == Errc::DomainError);
}

TEST_CASE("first passage densities") {
    for (double s : {0.2, 1.0, 3.0}) CHECK(first_passage_density(1.5, s, 0.0) == 0.0);
    CHECK(error_of([] { first_passage_density(1.5, 1.0, -0.1); }) == Errc::DomainError);
    CHECK(error_of([] { first_passage_tail(1.5, 1.0, 0.5); }) == Errc::DomainError);
    CHECK(error_of([] { first_passage_tail(1.5, 0.5, -1.0); }) == Errc::DomainError);
    CHECK(error_of([] { excursion_reweighting(1.5, 0.0, 0.5); }) == Errc::DomainError);
    // Reduction identity against direct integration over s.
    for (double theta : {1.5, 2.0}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const double direct = first_passage_direct(theta, 1.0, x);
            const double reduced = theta * integrate([&](double u) { return stable_density(theta, -u); }, 0.0, x);
            INFO("theta=", theta, " x=", x);
            CHECK(direct == doctest::Approx(reduced).epsilon(1e-6));
            for (double a : {0.3, 0.7}) {
                const double tail = first_passage_direct(theta, 1.0 - a, x);
                CHECK(first_passage_tail(theta, a, x) == doctest::Approx(tail).epsilon(1e-6));
                CHECK(excursion_reweighting(theta, a, x) ==
                      doctest::Approx(theta * first_passage_density(theta, 1.0 - a, x) / tail).epsilon(1e-6));
            }
        }
    }
    // Gaussian case: the integral tends to one.
    CHECK(first_passage_tail(2.0, 1e-9, 40.0) == doctest::Approx(1.0).epsilon(1e-6));
    // Continuity at zero.
    for (double a : {0.25, 0.5}) {
        CHECK(excursion_reweighting(1.5, a, 0.0) == doctest::Approx(1.0 / (1.0 - a)));
        CHECK(excursion_reweighting(1.5, a, 1e-4) == doctest::Approx(1.0 / (1.0 - a)).epsilon(1e-3));
    }
}

TEST_CASE("reweighting has unit mean along a discretised excursion") {
    // W_{an}/B_n for geometric walks that survive n steps; E[Gamma_a] -> 1.
    const auto law = geometric_critical();
    const OffspringSampler children(law);
    const long n = 10000;
    const double a = 0.5;
    const long at = static_cast<long>(a * n);
    const double scale = walk_scale(law, n);
    Rng rng(81, 0);
    double sum = 0.0;
    long kept = 0;
    while (kept < 3000) {
        long w = 0;
        long w_at = 0;
        bool survived = true;
        for (long i = 1; i <= n; ++i) {
            w += children(rng) - 1;
            if (w == -1) {
                survived = false;
                break;
            }
            if (i == at) w_at = w;
        }
        if (!survived) continue;
        ++kept;
        sum += excursion_reweighting(2.0, a, static_cast<double>(w_at) / scale);
    }
    CHECK(sum / kept == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Bernoulli rate function") {
    CHECK(bernoulli_rate(0.3, 0.3) == doctest::Approx(0.0));
    CHECK(bernoulli_rate(0.5, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(bernoulli_rate(0.5, 0.0) == doctest::Approx(std::log(2.0)));
    const double h = 1e-3;
    CHECK(bernoulli_rate(0.5, 0.5 + h) / (h * h) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(bernoulli_rate(0.2, 0.2 - h) / (h * h) == doctest::Approx(1.0 / (2 * 0.2 * 0.8)).epsilon(0.01));
    CHECK(error_of([] { bernoulli_rate(0.0, 0.5); }) == Errc::DomainError);
    CHECK(error_of([] { bernoulli_rate(0.5, 1.5); }) == Errc::DomainError);
}

TEST_CASE("predicted leaf probabilities") {
    const auto geo = geometric_critical();
    // sqrt((1/2) / (2 pi 2)) 100^{-3/2}
    CHECK(predicted_leaf_probability(geo, 100) == doctest::Approx(1e-3 / std::sqrt(8.0 * std::numbers::pi)).epsilon(1e-12));
    // General formula specialised with h = sigma / sqrt(2).
    for (const auto& law : {geo, dissection_law()}) {
        const double sigma = std::sqrt(law.variance());
        const double mu0 = law.leaf_probability();
        const double general = std::sqrt(mu0) * stable_density(2.0, 0.0) / (sigma / std::sqrt(2.0)) * std::pow(77.0, -1.5);
        CHECK(predicted_leaf_probability(law, 77) == doctest::Approx(general).epsilon(1e-12));
        CHECK(general == doctest::Approx(std::sqrt(mu0 / (2 * std::numbers::pi * law.variance())) * std::pow(77.0, -1.5)).epsilon(1e-12));
    }
    const auto lattice = validate_law(lattice_three());
    const double plain = std::sqrt(lattice.leaf_probability() / (2 * std::numbers::pi * lattice.variance())) * std::pow(100.0, -1.5);
    CHECK(predicted_leaf_probability(lattice, 100) == doctest::Approx(3.0 * plain).epsilon(1e-12));
    CHECK(error_of([&] { predicted_leaf_probability(lattice, 101); }) == Errc::LatticeViolation);
    // Heavy-tailed family.
    const auto heavy = zeta_stable_law(1.5);
    for (long n : {100L, 1000L}) {
        const double want = std::pow(heavy.leaf_probability(), 1.0 / 1.5) * stable_density(1.5, 0.0) / (walk_scale(heavy, n) * n);
        CHECK(predicted_leaf_probability(heavy, n) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("exact over predicted tends to one") {
    const auto geo = geometric_critical();
    std::vector<double> leaf_gap, size_gap;
    for (long n : {50L, 100L, 200L})
        leaf_gap.push_back(std::abs(count_probability(geo, DegreeSet::leaves(), n).probability / predicted_leaf_probability(geo, n) - 1.0));
    for (long n : {100L, 200L, 400L})
        size_gap.push_back(std::abs(forest_size_probability(geo, 1, n) / predicted_size_probability(geo, n).first - 1.0));
    CHECK(leaf_gap[1] < leaf_gap[0]);
    CHECK(leaf_gap[2] < leaf_gap[1]);
    CHECK(leaf_gap[2] < 0.01);
    CHECK(size_gap[1] < size_gap[0]);
    CHECK(size_gap[2] < size_gap[1]);
    CHECK(size_gap[2] < 0.01);
}

TEST_CASE("predicted size probabilities") {
    const auto geo = geometric_critical();
    const auto [exact_point, at_least] = predicted_size_probability(geo, 400);
    CHECK(exact_point == doctest::Approx(0.2820947918 / 8000.0).epsilon(1e-9));
    for (const auto& law : {geo, zeta_stable_law(1.5), zeta_stable_law(1.2)})
        for (long n : {50L, 400L, 5000L}) {
            const auto [p, q] = predicted_size_probability(law, n);
            CHECK(q / p == doctest::Approx(law.stability_index() * n).epsilon(1e-12));
        }
}

TEST_CASE("local limit for the heavy-tailed walk") {
    // B_n P[W_n = 0] -> p_1(0); exact through convolution powers.
    const auto law = zeta_stable_law(1.5);
    const long n = 2000;
    // Each step goes down by at most one, so mass above n never returns to 0.
    PowerOptions cap;
    cap.cap = n;
    const Pmf walk = convolve_power(jump_law(law, n), n, cap);
    const double local = walk_scale(law, n) * walk(0);
    CHECK(local == doctest::Approx(stable_density(1.5, 0.0)).epsilon(0.05));
}

}  // TEST_SUITE
