#include "gwleaf/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "gwleaf/error.hpp"

namespace gwleaf {

namespace {

using boost::math::quadrature::gauss_kronrod;

void check_theta(double theta) {
    if (!(theta > 1.0 && theta <= 2.0)) throw Error(Errc::DomainError, "theta must lie in (1, 2]");
}

// Integrates f over [a, b] in panels of the given width; throws when the
// accumulated error estimate exceeds `tol`.
template <class F>
double panel_integral(F f, double a, double b, double width, double tol) {
    double total = 0.0;
    double error = 0.0;
    const long panels = std::max<long>(1, static_cast<long>(std::ceil((b - a) / width)));
    const double h = (b - a) / static_cast<double>(panels);
    for (long i = 0; i < panels; ++i) {
        double err = 0.0;
        const double lo = a + h * static_cast<double>(i);
        total += gauss_kronrod<double, 31>::integrate(f, lo, lo + h, 8, 1e-13, &err);
        error += err;
    }
    if (!(error <= tol)) throw Error(Errc::QuadratureNonConvergence, "quadrature error estimate too large");
    return total;
}

}  // namespace

double stable_density_by_inversion(double theta, double x) {
    check_theta(theta);
    const double c = std::cos(std::numbers::pi * theta / 2.0);
    const double s = std::sin(std::numbers::pi * theta / 2.0);
    // exp(u^theta c) < e^{-45} beyond the cutoff.
    const double cutoff = std::pow(45.0 / -c, 1.0 / theta);
    const double max_freq = std::abs(x) + theta * std::abs(s) * std::pow(cutoff, theta - 1.0) + 1.0;
    const double width = std::min(1.0, std::numbers::pi / max_freq);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 1.0;
        const double ut = std::pow(u, theta);
        return std::exp(ut * c) * std::cos(u * x + ut * s);
    };
    const double value = panel_integral(integrand, 0.0, cutoff, width, 1e-9) / std::numbers::pi;
    return std::max(0.0, value);
}

double stable_density(double theta, double x) {
    check_theta(theta);
    if (theta == 2.0) return std::exp(-x * x / 4.0) / std::sqrt(4.0 * std::numbers::pi);
    return stable_density_by_inversion(theta, x);
}

double stable_cdf(double theta, double x) {
    check_theta(theta);
    if (theta == 2.0) return 0.5 * std::erfc(-x / 2.0);
    // Gil-Pelaez inversion of the characteristic function exp((-iu)^theta).
    const double c = std::cos(std::numbers::pi * theta / 2.0);
    const double s = std::sin(std::numbers::pi * theta / 2.0);
    const double cutoff = std::pow(45.0 / -c, 1.0 / theta);
    const double max_freq = std::abs(x) + theta * std::abs(s) * std::pow(cutoff, theta - 1.0) + 1.0;
    const double width = std::min(1.0, std::numbers::pi / max_freq);
    auto integrand = [&](double u) {
        if (u <= 0.0) return x;
        const double ut = std::pow(u, theta);
        return std::exp(ut * c) * std::sin(u * x + ut * s) / u;
    };
    // u^{theta-1} near zero: the first panel needs an endpoint-robust rule.
    double head_err = 0.0;
    const double head = boost::math::quadrature::tanh_sinh<double>().integrate(integrand, 0.0, width, 1e-12, &head_err);
    const double value = 0.5 + (head + panel_integral(integrand, width, cutoff, width, 1e-9)) / std::numbers::pi;
    if (!(head_err <= 1e-9)) throw Error(Errc::QuadratureNonConvergence, "stable_cdf near the origin");
    return std::clamp(value, 0.0, 1.0);
}

double stable_median(double theta) {
    check_theta(theta);
    if (theta == 2.0) return 0.0;
    auto f = [&](double x) { return stable_cdf(theta, x) - 0.5; };
    boost::math::tools::eps_tolerance<double> tol(40);
    std::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(f, -3.0, 3.0, tol, iters);
    return 0.5 * (a + b);
}

double stable_density_at(double theta, double s, double x) {
    if (!(s > 0.0)) throw Error(Errc::DomainError, "p_s needs s > 0");
    const double scale = std::pow(s, -1.0 / theta);
    return scale * stable_density(theta, x * scale);
}

double first_passage_density(double theta, double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw Error(Errc::DomainError, "q_s needs s > 0 and x >= 0");
    return x / s * stable_density_at(theta, s, -x);
}

double first_passage_tail(double theta, double a, double x) {
    check_theta(theta);
    if (!(a > 0.0 && a < 1.0) || x < 0.0) throw Error(Errc::DomainError, "int_q needs a in (0,1) and x >= 0");
    const double y = x * std::pow(1.0 - a, -1.0 / theta);
    if (theta == 2.0) return std::erf(y / 2.0);
    if (y == 0.0) return 0.0;
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate([&](double u) { return stable_density(theta, -u); }, 0.0, y, 12,
                                                          1e-11, &err);
    if (!(err <= 1e-8)) throw Error(Errc::QuadratureNonConvergence, "int_q");
    return theta * v;
}

double excursion_reweighting(double theta, double a, double x) {
    check_theta(theta);
    if (!(a > 0.0 && a < 1.0) || x < 0.0) throw Error(Errc::DomainError, "Gamma_a needs a in (0,1) and x >= 0");
    if (x == 0.0) return 1.0 / (1.0 - a);
    const double denom = first_passage_tail(theta, a, x);
    if (denom <= 0.0) return 1.0 / (1.0 - a);
    return theta * first_passage_density(theta, 1.0 - a, x) / denom;
}

double bernoulli_rate(double mu0, double x) {
    if (!(mu0 > 0.0 && mu0 < 1.0) || !(x >= 0.0 && x <= 1.0)) {
        throw Error(Errc::DomainError, "bernoulli_rate needs mu0 in (0,1) and x in [0,1]");
    }
    double r = 0.0;
    if (x > 0.0) r += x * std::log(x / mu0);
    if (x < 1.0) r += (1.0 - x) * std::log((1.0 - x) / (1.0 - mu0));
    return r;
}

double predicted_leaf_probability(const OffspringLaw& law, long n) {
    if (n < 1) throw Error(Errc::DomainError, "n must be >= 1");
    const long g = law.leaf_gcd();
    if ((n - 1) % g != 0) throw Error(Errc::LatticeViolation, "leaf_gcd does not divide n-1");
    const double nn = static_cast<double>(n);
    if (law.finite_variance()) {
        return std::sqrt(law.leaf_probability() / (2.0 * std::numbers::pi * law.variance())) * static_cast<double>(g) *
               std::pow(nn, -1.5);
    }
    const double theta = law.stability_index();
    // h(n) n^{1/theta + 1} = B_n n.
    return std::pow(law.leaf_probability(), 1.0 / theta) * stable_density(theta, 0.0) * static_cast<double>(g) / (walk_scale(law, n) * nn);
}

std::pair<double, double> predicted_size_probability(const OffspringLaw& law, long n) {
    if (n < 1) throw Error(Errc::DomainError, "n must be >= 1");
    const double theta = law.stability_index();
    const double b = walk_scale(law, n);
    const double density = stable_density(theta, 0.0);
    return {density / (static_cast<double>(n) * b), theta * density / b};
}

}  // namespace gwleaf
