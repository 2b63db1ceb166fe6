#include "doctest.h"
#include "oracles.hpp"

#include "crossimpact/error.hpp"
#include "crossimpact/kernels.hpp"

#include <cmath>
#include <random>

using namespace crossimpact;

namespace {

const PowerLawKernel kIJ{1.13e-4, 7.34, 0.14};
const PowerLawKernel kJI{0.79e-4, 4.75, 0.03};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("kernel evaluation") {
    CHECK(kernel_eval(kIJ, 0.0) == 1.13e-4);
    for (const auto& k : {kIJ, kJI, PowerLawKernel{2.0, 0.5, 1.7}}) {
        CHECK(kernel_eval(k, k.tau0) == doctest::Approx(k.gamma0 / std::pow(2.0, k.beta)).epsilon(1e-15));
    }
    // second implementation: exp/log instead of pow
    const double expected = 0.79e-4 * std::exp(-0.03 * std::log(1.0 + 100.0 / 4.75));
    CHECK(rel(kernel_eval(kJI, 100.0), expected) < 1e-14);
    CHECK_THROWS_AS(kernel_eval(kIJ, -1e-9), DomainError);
    CHECK_THROWS_AS((PowerLawKernel{1.0, 0.0, 0.1}.validate()), ParameterError);
    CHECK_THROWS_AS((PowerLawKernel{1.0, 1.0, -0.1}.validate()), ParameterError);
}

TEST_CASE("kernel is strictly decreasing for beta > 0") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    for (int n = 0; n < 1000; ++n) {
        double a = u(rng), b = u(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(kernel_eval(kIJ, a) > kernel_eval(kIJ, b));
    }
}

TEST_CASE("first and second primitives match Simpson integration") {
    const std::vector<PowerLawKernel> kernels{kIJ, kJI, {1.0, 2.0, 0.0}, {1.0, 2.0, 1.0}, {1.0, 2.0, 2.0},
                                              {1.0, 0.3, 3.5}, {1.0, 50.0, 0.5}};
    for (const auto& k : kernels) {
        for (double x : {1e-4, 0.01, 0.09, 0.11, 1.0, 7.0, 40.0}) {
            const double f = oracle::simpson_graded([&](double u) { return oracle::power_law(k.gamma0, k.tau0, k.beta, u); }, x, k.tau0);
            const double f2 = oracle::simpson_graded(
                [&](double u) { return (x - u) * oracle::power_law(k.gamma0, k.tau0, k.beta, u); }, x, k.tau0);
            INFO("tau0=" << k.tau0 << " beta=" << k.beta << " x=" << x);
            CHECK(rel(kernel_primitive(k, x), f) < 1e-10);
            CHECK(rel(kernel_second_primitive(k, x), f2) < 1e-10);
        }
        CHECK(kernel_primitive(k, 0.0) == 0.0);
        CHECK(kernel_second_primitive(k, -1.0) == 0.0);
    }
}

TEST_CASE("primitives are continuous across the small-argument series switch") {
    for (const auto& k : {kIJ, kJI, PowerLawKernel{1.0, 1.0, 1.0}, PowerLawKernel{1.0, 1.0, 2.0}}) {
        const double x = 0.05 * k.tau0;
        const double lo = kernel_second_primitive(k, x * (1.0 - 1e-12));
        const double hi = kernel_second_primitive(k, x * (1.0 + 1e-12));
        CHECK(rel(lo, hi) < 1e-10);
    }
}

TEST_CASE("beta near the logarithmic branches is continuous") {
    for (double b : {1.0, 2.0}) {
        const PowerLawKernel at{1.0, 3.0, b}, below{1.0, 3.0, b - 1e-7}, above{1.0, 3.0, b + 1e-7};
        const double v = kernel_second_primitive(at, 20.0);
        CHECK(rel(kernel_second_primitive(below, 20.0), v) < 1e-5);
        CHECK(rel(kernel_second_primitive(above, 20.0), v) < 1e-5);
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("double primitive examples") {
    CHECK(kernel_double_primitive(kIJ, {1.0, 1.0, 0.0, 1.0}) == 0.0);
    CHECK(kernel_double_primitive(kIJ, {0.0, 1.0, 2.0, 3.0}) == 0.0);  // entirely acausal
    const PowerLawKernel flat{3.5, 1.0, 0.0};
    CHECK(kernel_double_primitive(flat, {1.0, 2.0, 0.0, 1.0}) == doctest::Approx(3.5).epsilon(1e-14));

    // triangle [0,1]x[0,min(t,1)] against a second-order grid sum at h = 1e-4
    const double h = 1e-4;
    const double grid = oracle::grid_box(kIJ.gamma0, kIJ.tau0, kIJ.beta, 0, 10000, 0, 10000, h, true);
    CHECK(rel(kernel_double_primitive(kIJ, {0.0, 1.0, 0.0, 1.0}), grid) < 1e-6);
}

TEST_CASE("double primitive agrees with grid sums on random boxes") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> pos(0, 4000);
    const double h = 1e-3;
    for (int n = 0; n < 200; ++n) {
        long A = pos(rng), B = pos(rng), C = pos(rng), D = pos(rng);
        if (A > B) std::swap(A, B);
        if (C > D) std::swap(C, D);
        const PowerLawKernel k{1.0, 1.0 + 0.1 * (n % 50), 0.05 * (n % 60)};
        const double exact = kernel_double_primitive(k, {A * h, B * h, C * h, D * h});
        const double grid = oracle::grid_box(k.gamma0, k.tau0, k.beta, A, B, C, D, h, true);
        CHECK(std::abs(exact - grid) <= 1e-6 * std::abs(grid) + 1e-12);
    }
}

TEST_CASE("first-order grid sums converge to the double primitive") {
    for (const auto& k : {kIJ, kJI, PowerLawKernel{1.0, 0.5, 1.5}}) {
        const double exact = kernel_double_primitive(k, {0.0, 1.0, 0.0, 1.0});
        double prev = std::abs(oracle::grid_box(k.gamma0, k.tau0, k.beta, 0, 100, 0, 100, 0.01, false) - exact);
        for (long n : {200L, 400L, 800L, 1600L}) {
            const double err = std::abs(oracle::grid_box(k.gamma0, k.tau0, k.beta, 0, n, 0, n, 1.0 / n, false) - exact);
            CHECK(err <= 0.5 * prev * (1.0 + 1e-3));
            prev = err;
        }
    }
}

TEST_CASE("quadrature agrees with the closed form") {
    const GaussLegendre rule(64);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int n = 0; n < 200; ++n) {
        CausalBox box{u(rng), u(rng), u(rng), u(rng)};
        if (box.t_lo > box.t_hi) std::swap(box.t_lo, box.t_hi);
        if (box.s_lo > box.s_hi) std::swap(box.s_lo, box.s_hi);
        const double exact = kernel_double_primitive(kIJ, box);
        const double quad = causal_box_quadrature([](double tau) { return kIJ(tau); }, box, rule);
        CHECK(std::abs(exact - quad) <= 1e-9 * std::abs(exact) + 1e-18);
    }
}

TEST_CASE("signed volume impact") {
    CHECK(signed_volume_impact({0.61}, 1.0) == 1.0);
    CHECK(signed_volume_impact({0.5}, -0.25) == -0.5);
    CHECK(rel(signed_volume_impact({0.61}, 0.1), std::exp(0.61 * std::log(0.1))) < 1e-15);
    CHECK(signed_volume_impact({0.3}, 0.0) == 0.0);
    CHECK(VolumeImpact{0.61}.unsigned_eval(1.0) == 1.0);
    CHECK_THROWS_AS(VolumeImpact{0.0}.validate(), ParameterError);
    CHECK_THROWS_AS(VolumeImpact{1.2}.validate(), ParameterError);
}

TEST_CASE("tabulated kernel indexing") {
    const TabulatedKernel t{{3.0, 2.0, 1.0}};
    CHECK(t.at(1) == 3.0);
    CHECK(t.at(3) == 1.0);
    CHECK_THROWS_AS(t.at(0), DomainError);
    CHECK_THROWS_AS(t.at(4), DomainError);
}

TEST_CASE("price path") {
    const RateProfile none;
    const auto zero = price_path(kIJ, kJI, {0.61}, {0.5}, none, none, 0.01, 1.0);
    for (double x : zero) CHECK(x == 0.0);

    const RateProfile buy{{0.0, 2.0, 0.1}};
    const auto self_only = price_path(kIJ, {0.0, 1.0, 0.0}, {0.61}, {0.5}, buy, none, 0.01, 2.0);
    for (std::size_t k = 1; k < self_only.size(); ++k) CHECK(self_only[k] >= self_only[k - 1]);

    CHECK_THROWS_AS(price_path(kIJ, kJI, {0.61}, {0.5}, buy, none, 0.0, 1.0), ParameterError);
}

TEST_CASE("price path matches a brute-force double loop") {
    // preset schedule: stock i buys 0.1 for half its period then sells
    const RateProfile own{{0.0, 0.5, 0.1}, {0.5, 1.0, -0.1}};
    const RateProfile other{{0.0, 0.7, 0.05}, {0.7, 1.0, -0.05 * 0.7 / 0.3}};
    const double h = 0.01;
    const auto path = price_path(kIJ, kJI, {0.61}, {0.5}, own, other, h, 1.0);
    auto rate = [](const RateProfile& p, double t) {
        for (const auto& s : p) {
            if (t >= s.start && t < s.end) return s.rate;
        }
        return 0.0;
    };
    for (int k = 0; k <= 100; ++k) {
        double acc = 0.0;
        for (int m = 0; m < k; ++m) {
            acc += oracle::power_law(kIJ.gamma0, kIJ.tau0, kIJ.beta, (k - m) * h) * oracle::signed_power(rate(own, m * h), 0.61) +
                   oracle::power_law(kJI.gamma0, kJI.tau0, kJI.beta, (k - m) * h) * oracle::signed_power(rate(other, m * h), 0.5);
        }
        CHECK(std::abs(path[k] - acc * h) <= 1e-12 * std::abs(acc * h) + 1e-22);
    }
}

TEST_CASE("price path is linear in the rates when delta = 1") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> r(-1.0, 1.0), t(0.0, 1.0);
    for (int n = 0; n < 50; ++n) {
        const double s1 = t(rng), s2 = t(rng);
        const double ra = r(rng), rb = r(rng), rc = r(rng);
        const RateProfile a{{0.0, s1, ra}, {s1, 1.0, rb}};
        const RateProfile b{{0.0, s2, rc}};
        RateProfile ab;
        // split at the union of breakpoints
        std::vector<double> cuts{0.0, std::min(s1, s2), std::max(s1, s2), 1.0};
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            const double va = mid < s1 ? ra : rb;
            const double vb = mid < s2 ? rc : 0.0;
            ab.push_back({cuts[k], cuts[k + 1], va + vb});
        }
        const VolumeImpact lin{1.0};
        const auto pa = price_path(kIJ, kJI, lin, lin, a, b, 0.01, 1.0);
        const auto pb = price_path(kIJ, kJI, lin, lin, b, a, 0.01, 1.0);
        const auto pab = price_path(kIJ, kJI, lin, lin, ab, ab, 0.01, 1.0);
        for (std::size_t k = 0; k < pa.size(); ++k) CHECK(std::abs(pab[k] - (pa[k] + pb[k])) < 1e-12);
    }
}
