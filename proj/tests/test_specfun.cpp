#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "eislab/specfun.hpp"

using namespace eislab;
using Catch::Approx;

namespace {

// Independent quadrature oracle for K_it(x): plain trapezoid refinement of
// the defining integral on the real axis.  Only trustworthy for small t,
// which is exactly where it is used.
double k_bessel_quadrature_oracle(double t, double x) {
    double umax = 1.0;
    while (x * std::cosh(umax) < 40.0) umax += 0.5;
    auto f = [&](double u) { return std::exp(-x * std::cosh(u)) * std::cos(t * u); };
    int n = 128;
    double h = umax / n;
    double T = 0.5 * (f(0.0) + f(umax));
    for (int i = 1; i < n; ++i) T += f(i * h);
    T *= h;
    for (int it = 0; it < 16; ++it) {
        double M = 0.0;
        for (int i = 0; i < n; ++i) M += f((i + 0.5) * h);
        double T2 = 0.5 * T + 0.5 * h * M;
        n *= 2;
        h *= 0.5;
        if (std::abs(T2 - T) < 1e-13 * std::abs(T2) && it > 3) { T = T2; break; }
        T = T2;
    }
    return T;
}

// Alternating-series route to zeta on the real axis, independent of the
// Euler-Maclaurin implementation: zeta(s) = eta(s)/(1 - 2^{1-s}) with eta
// summed by repeated averaging (van Wijngaarden).
double zeta_eta_oracle(double s) {
    const int N = 40;
    std::vector<double> row(N);
    double partial = 0.0;
    for (int n = 0; n < N; ++n) {
        partial += ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(n + 1.0, -s);
        row[n] = partial;
    }
    for (int k = N - 1; k > 0; --k)
        for (int i = 0; i < k; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    return row[0] / (1.0 - std::pow(2.0, 1.0 - s));
}

}  // namespace

TEST_CASE("divisor_sigma basics", "[specfun]") {
    CHECK(divisor_sigma(0.0, 6).real() == Approx(4.0).margin(1e-14));
    CHECK(divisor_sigma(1.0, 6).real() == Approx(12.0).margin(1e-12));
    // sigma_{-2it}(p) = 1 + p^{-2it}
    complexd nu(0.0, -2.0 * 3.7);
    complexd got = divisor_sigma(nu, 13);
    complexd want = 1.0 + std::exp(nu * std::log(13.0));
    CHECK(std::abs(got - want) < 1e-13);
    CHECK_THROWS_AS(divisor_sigma(0.0, 0), validation_error);
}

TEST_CASE("divisor_sigma is multiplicative on coprime pairs", "[specfun]") {
    std::mt19937_64 rng(411);
    complexd nu(-0.7, 1.3);
    int done = 0;
    while (done < 60) {
        long long m = 1 + static_cast<long long>(uniform01(rng) * 400);
        long long n = 1 + static_cast<long long>(uniform01(rng) * 400);
        if (std::gcd(m, n) != 1) continue;
        ++done;
        complexd lhs = divisor_sigma(nu, m * n);
        complexd rhs = divisor_sigma(nu, m) * divisor_sigma(nu, n);
        REQUIRE(std::abs(lhs - rhs) < 1e-11 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("gamma matches exact values and recurrence", "[specfun]") {
    CHECK(gamma_c(5.0).real() == Approx(24.0).epsilon(1e-13));
    CHECK(gamma_c(0.5).real() == Approx(std::sqrt(pi)).epsilon(1e-13));
    // Gamma(z+1) = z Gamma(z) at complex points, including large |Im|
    for (complexd z : {complexd(0.5, 3.0), complexd(1.25, -20.0), complexd(0.75, 60.0)}) {
        complexd lhs = gamma_c(z + 1.0);
        complexd rhs = z * gamma_c(z);
        CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(rhs));
    }
    // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    double t = 7.3;
    double got = std::norm(gamma_c(complexd(0.5, t)));
    CHECK(got == Approx(pi / std::cosh(pi * t)).epsilon(1e-11));
}

TEST_CASE("zeta at classical points", "[specfun]") {
    CHECK(zeta(2.0).real() == Approx(pi * pi / 6.0).epsilon(1e-12));
    // direct-series oracle at s = 3 with a rigorous tail bound below 1e-13
    double direct = 0.0;
    for (int n = 1; n <= 100000; ++n) direct += 1.0 / (static_cast<double>(n) * n * n);
    direct += 1.0 / (2.0 * 100000.0 * 100000.0);  // integral tail estimate
    CHECK(zeta(3.0).real() == Approx(direct).epsilon(1e-10));
    CHECK(std::abs(zeta(3.0).imag()) < 1e-14);
    CHECK_THROWS_AS(zeta(complexd(1.0, 0.0)), pole_error);
}

TEST_CASE("zeta off the real axis: two truncation orders agree", "[specfun]") {
    complexd s(1.0, 1.4);
    complexd a = zeta_euler_maclaurin(s, 24, 8);
    complexd b = zeta_euler_maclaurin(s, 48, 8);
    CHECK(std::abs(a - b) < 1e-10 * std::abs(b));
    CHECK(std::abs(b) > 0.1);
    // independent eta-series oracle on the real axis
    CHECK(zeta(1.5).real() == Approx(zeta_eta_oracle(1.5)).epsilon(1e-9));
}

TEST_CASE("zeta Euler product converges in P at s = 3", "[specfun]") {
    double target = zeta(3.0).real();
    double prev_err = 1e9;
    for (long long P : {100, 1000, 10000}) {
        double prod = 1.0;
        for (long long p : primes_up_to(P)) prod /= (1.0 - std::pow(static_cast<double>(p), -3.0));
        double err = std::abs(prod - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("completed zeta functional equation and exact values", "[specfun]") {
    // s = 2: pi^{-1} Gamma(1) zeta(2) = pi/6
    CHECK(completed_zeta(2.0).real() == Approx(pi / 6.0).epsilon(1e-12));
    // product of independently computed factors at s = 1/2
    double want = std::pow(pi, -0.25) * std::tgamma(0.25) * zeta_eta_oracle(0.5);
    CHECK(completed_zeta(0.5).real() == Approx(want).epsilon(1e-8));
    // functional-equation pairs
    for (complexd s : {complexd(0.3, 2.0), complexd(0.8, -5.0), complexd(0.5, 30.0)}) {
        complexd a = completed_zeta(s);
        complexd b = completed_zeta(1.0 - s);
        CHECK(std::abs(a - b) < 1e-9 * (std::abs(a) + 1e-30));
    }
}

TEST_CASE("bessel_k closed form at order 1/2", "[specfun]") {
    // K_{1/2}(y) = sqrt(pi/(2y)) e^{-y}
    double want = std::sqrt(pi / 4.0) * std::exp(-2.0);
    CHECK(bessel_k(0.5, 2.0).real() == Approx(want).epsilon(1e-12));
    CHECK(bessel_k(0.5, 2.0).imag() == 0.0);
}

TEST_CASE("bessel_k order zero against quadrature oracle", "[specfun]") {
    CHECK(bessel_k(0.0, 1.0).real() == Approx(k_bessel_quadrature_oracle(0.0, 1.0)).epsilon(1e-12));
    CHECK(bessel_k(0.0, 0.3).real() == Approx(k_bessel_quadrature_oracle(0.0, 0.3)).epsilon(1e-11));
}

TEST_CASE("bessel_k small-t cross-check between contour and oracle", "[specfun]") {
    // at t <= 3 and x >= 1 the plain-axis oracle still has ~10 good digits
    for (double t : {0.5, 1.0, 3.0}) {
        for (double x : {1.0, 2.5, 6.0}) {
            double want = k_bessel_quadrature_oracle(t, x);
            double got = bessel_k(complexd(0.0, t), x).real();
            REQUIRE(got == Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("bessel_k symmetric in the sign of imaginary order", "[specfun]") {
    complexd a = bessel_k(complexd(0.0, 5.0), 3.0);
    complexd b = bessel_k(complexd(0.0, -5.0), 3.0);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == 0.0);
    CHECK(b.imag() == 0.0);
}

TEST_CASE("bessel_k contour and series routes agree where both apply", "[specfun]") {
    // both algorithms are valid for t slightly below x; they share no code
    for (double t : {2.0, 8.0, 20.0, 45.0}) {
        for (double ratio : {0.9, 0.95, 0.98}) {
            if (t > 30.0 && ratio < 0.95) continue;  // series cancellation blows up far from the seam
            double x = t / ratio;
            double from_contour = detail::bessel_k_contour(0.0, t, x).real();
            double from_series = detail::bessel_k_series(complexd(0.0, t), x).real();
            double scale = std::abs(from_contour) + 1e-300;
            REQUIRE(std::abs(from_contour - from_series) < 1e-9 * scale);
        }
    }
}

TEST_CASE("bessel_k recurrence for complex order", "[specfun]") {
    // K_{nu-1}(y) - K_{nu+1}(y) = -(2 nu / y) K_nu(y)
    for (double t : {0.0, 1.0, 5.0, 12.0, 25.0}) {
        for (double y : {0.5, 1.0, 3.0, 8.0, 30.0}) {
            complexd nu(0.5, t);
            complexd lhs = bessel_k(nu - 1.0, y) - bessel_k(nu + 1.0, y);
            complexd rhs = -2.0 * nu / y * bessel_k(nu, y);
            double scale = std::abs(bessel_k(nu, y)) * (2.0 * std::abs(nu) / y) + 1e-300;
            REQUIRE(std::abs(lhs - rhs) < 1e-8 * scale + 1e-280);
        }
    }
}

TEST_CASE("bessel_k decay envelope for y >= 1", "[specfun]") {
    // y -> K_it(y) e^y sqrt(y) stays bounded and slowly varying
    double t = 5.0;
    double prev = 0.0;
    for (double y = 1.0; y <= 30.0; y += 1.0) {
        double v = bessel_k(complexd(0.0, t), y).real() * std::exp(y) * std::sqrt(y);
        REQUIRE(std::abs(v) < 2.0);
        if (y > 10.0) REQUIRE(std::abs(v - prev) < 0.2);
        prev = v;
    }
}

TEST_CASE("bessel_k domain and capability errors", "[specfun]") {
    CHECK_THROWS_AS(bessel_k(complexd(0.0, 1.0), 0.0), validation_error);
    CHECK_THROWS_AS(bessel_k(complexd(0.0, 1.0), -2.0), validation_error);
    CHECK_THROWS_AS(bessel_k(complexd(0.0, 101.0), 1.0), capability_error);
}

TEST_CASE("primes and factorization", "[specfun]") {
    auto pr = primes_up_to(30);
    CHECK(pr == std::vector<long long>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    auto f = factorize(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<long long, int>(2, 3));
    CHECK(f[1] == std::pair<long long, int>(3, 2));
    CHECK(f[2] == std::pair<long long, int>(5, 1));
}
