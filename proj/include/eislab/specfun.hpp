#ifndef EISLAB_SPECFUN_HPP
#define EISLAB_SPECFUN_HPP

// Special functions used by the Fourier expansions and the Dirichlet-series
// identities: complex gamma (Lanczos), Riemann zeta on vertical lines
// (Euler-Maclaurin), the completed zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s),
// the modified Bessel function K_nu(x) for complex order (chiefly nu = it),
// and exact divisor sums sigma_nu(n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "eislab/common.hpp"

namespace eislab {

// ---------------------------------------------------------------------------
// primes and factorization
// ---------------------------------------------------------------------------

inline std::vector<long long> primes_up_to(long long n) {
    std::vector<long long> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (long long p = 2; p <= n; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (long long m = p * p; m <= n; m += p) comp[static_cast<std::size_t>(m)] = true;
    }
    return out;
}

inline std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw validation_error("factorize: n must be positive");
    std::vector<std::pair<long long, int>> f;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// sigma_nu(n) = sum_{d | n} d^nu, by exact divisor enumeration per prime power.
inline complexd divisor_sigma(complexd nu, long long n) {
    if (n < 1) throw validation_error("divisor_sigma: n must be positive");
    complexd total = 1.0;
    for (auto [p, e] : factorize(n)) {
        complexd pnu = std::exp(nu * std::log(static_cast<double>(p)));
        complexd local = 1.0, power = 1.0;
        for (int j = 1; j <= e; ++j) {
            power *= pnu;
            local += power;
        }
        total *= local;
    }
    return total;
}

// ---------------------------------------------------------------------------
// complex gamma (Lanczos, g = 7)
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

// valid for Re z >= 0.5
inline complexd gamma_lanczos_half(complexd z) {
    z -= 1.0;
    complexd x = lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (z + static_cast<double>(i));
    complexd t = z + lanczos_g + 0.5;
    return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

}  // namespace detail

inline complexd gamma_c(complexd z) {
    if (z.real() >= 0.5) return detail::gamma_lanczos_half(z);
    // reflection, computed on values (no log-branch bookkeeping needed)
    return pi / (std::sin(pi * z) * detail::gamma_lanczos_half(1.0 - z));
}

// log Gamma for Re z >= 0.5 only; used inside exp() where the 2*pi*i branch
// ambiguity is harmless.
inline complexd lgamma_right(complexd z) {
    if (z.real() < 0.5) throw capability_error("lgamma_right: Re z < 1/2");
    complexd zm = z - 1.0;
    complexd x = detail::lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += detail::lanczos_c[i] / (zm + static_cast<double>(i));
    complexd t = zm + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

// ---------------------------------------------------------------------------
// Riemann zeta by Euler-Maclaurin
// ---------------------------------------------------------------------------

namespace detail {

// B_2, B_4, ..., B_20
inline constexpr double bernoulli_2k[10] = {
    1.0 / 6.0,     -1.0 / 30.0,      1.0 / 42.0,     -1.0 / 30.0,   5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0};

}  // namespace detail

// zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//           + sum_{k=1}^{M} B_{2k}/(2k)! (s)(s+1)...(s+2k-2) N^{-s-2k+1}
inline complexd zeta_euler_maclaurin(complexd s, int N, int M) {
    if (M < 1 || M > 10) throw capability_error("zeta: correction order out of range");
    complexd sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    double lnN = std::log(static_cast<double>(N));
    complexd Nms = std::exp(-s * lnN);  // N^{-s}
    sum += Nms * static_cast<double>(N) / (s - 1.0);
    sum += 0.5 * Nms;
    complexd poch = s;                       // (s)(s+1)...(s+2k-2), starts at k=1
    complexd npow = Nms / static_cast<double>(N);  // N^{-s-2k+1}, starts at k=1
    double fact = 2.0;                       // (2k)!
    double invN2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    for (int k = 1; k <= M; ++k) {
        sum += detail::bernoulli_2k[k - 1] / fact * poch * npow;
        if (k == M) break;
        poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        npow *= invN2;
        fact *= static_cast<double>(2 * k + 1) * static_cast<double>(2 * k + 2);
    }
    return sum;
}

inline complexd zeta(complexd s) {
    if (std::abs(s - 1.0) < 1e-12) throw pole_error("zeta: pole at s = 1");
    if (std::abs(s.imag()) > 220.0) throw capability_error("zeta: |Im s| too large");
    int N = std::max(20, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
    return zeta_euler_maclaurin(s, N, 8);
}

// xi(s) = pi^{-s/2} Gamma(s/2) zeta(s); satisfies xi(s) = xi(1-s).
inline complexd completed_zeta(complexd s) {
    if (std::abs(s) < 1e-12 || std::abs(s - 1.0) < 1e-12)
        throw pole_error("completed_zeta: pole at s = 0 or 1");
    complexd z = (s.real() >= 0.5) ? s : 1.0 - s;  // functional equation, better zeta accuracy
    return std::exp(-0.5 * z * std::log(pi)) * gamma_c(0.5 * z) * zeta(z);
}

// ---------------------------------------------------------------------------
// K_nu(x) for complex order
// ---------------------------------------------------------------------------
//
// Two regimes, split at |Im nu| = 0.985 x.
//
// (1) |Im nu| <= 0.985 x: the defining integral
//        K_nu(x) = (1/2) Int_R exp(-x cosh u - nu u) du
//     is integrated on the deformed path u = sigma + i rho(sigma) with
//        rho(sigma) = -asin(t sigma / (x sinh sigma)),      t = Im nu,
//     on which Im(-x cosh u - i t u) vanishes identically.  The integrand's
//     large exponential is then real and unimodal with peak value
//     exp(-x cos beta - t beta), beta = asin(t/x), which is the size of the
//     result itself, so no digits are lost to oscillation.  A straight
//     trapezoid rule with step doubling converges fast on this path.
//     (The undeformed real-axis rule loses ~ (pi t/2 - x)/ln 10 digits to
//     cancellation and is useless for t beyond ~ 25.)
//
// (2) |Im nu| > 0.985 x: reflection through the ascending series,
//        K_nu = pi/2 (I_{-nu} - I_nu)/sin(pi nu),
//     with the sums accumulated in long double.  For purely imaginary order
//     this collapses to K_it = -pi Im(I_it)/sinh(pi t), which is manifestly
//     real.  Worst-case cancellation in the series is exp(x^2/4t), harmless
//     for the supported box.

namespace detail {

inline double sigma_over_sinh(double s) {
    if (std::abs(s) < 1e-4) {
        double s2 = s * s;
        return 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
    }
    return s / std::sinh(s);
}

inline double d_sigma_over_sinh(double s) {
    if (std::abs(s) < 1e-4) {
        double s2 = s * s;
        return -s / 3.0 + 7.0 * s2 * s / 90.0;
    }
    double sh = std::sinh(s);
    return (sh - s * std::cosh(s)) / (sh * sh);
}

struct KContour {
    double x, t;
    // rho(sigma) and phi(sigma) = Re h on the contour
    double rho(double s) const { return -std::asin(std::min(1.0, t * sigma_over_sinh(s) / x)); }
    double rho_prime(double s) const {
        double r = t * sigma_over_sinh(s) / x;
        double dr = t * d_sigma_over_sinh(s) / x;
        double g = 1.0 - r * r;
        if (g < 1e-14) g = 1e-14;
        return -dr / std::sqrt(g);
    }
    double phi(double s) const {
        double r = rho(s);
        return -x * std::cosh(s) * std::cos(r) + t * r;
    }
};

inline complexd bessel_k_contour(double mu, double t, double x) {
    KContour C{x, t};
    double beta = std::asin(std::min(1.0, t / x));
    double phi0 = -x * std::cos(beta) - t * beta;
    if (phi0 < -740.0) return 0.0;  // true value underflows double range

    // range: phi decays like -x cosh(sigma) once rho has relaxed toward 0
    double smax = 1.0;
    while (smax < 120.0 && C.phi(smax) - phi0 + std::abs(mu) * smax > -46.0) smax += 0.5;

    auto f = [&](double s) -> complexd {
        double r = C.rho(s);
        double rp = C.rho_prime(s);
        double mag = std::exp(C.phi(s) - phi0 - mu * s);
        complexd rot(std::cos(mu * r), -std::sin(mu * r));
        return mag * rot * complexd(1.0, rp);
    };

    // trapezoid with step doubling on [-smax, smax]
    int n = 64;
    double h = 2.0 * smax / n;
    complexd T = 0.5 * (f(-smax) + f(smax));
    for (int i = 1; i < n; ++i) T += f(-smax + i * h);
    T *= h;
    for (int iter = 0; iter < 14; ++iter) {
        complexd M = 0.0;
        for (int i = 0; i < n; ++i) M += f(-smax + (i + 0.5) * h);
        complexd T2 = 0.5 * T + 0.5 * h * M;
        n *= 2;
        h *= 0.5;
        bool done = std::abs(T2 - T) <= 1e-14 * std::abs(T2) + 1e-300;
        T = T2;
        if (done && iter >= 3) break;
    }
    return 0.5 * std::exp(phi0) * T;
}

inline complexd bessel_k_series(complexd nu, double x) {
    using cld = std::complex<long double>;
    const long double q4 = static_cast<long double>(x) * x / 4.0L;
    const cld nul(static_cast<long double>(nu.real()), static_cast<long double>(nu.imag()));
    const long double lx = std::log(static_cast<long double>(x) / 2.0L);

    auto series = [&](cld shift, complexd inv_gamma1) {
        // sum_k (x^2/4)^k / (k! Gamma(k + 1 + shift)) starting from 1/Gamma(1+shift)
        cld term(static_cast<long double>(inv_gamma1.real()),
                 static_cast<long double>(inv_gamma1.imag()));
        cld sum = term;
        for (int k = 0; k < 600; ++k) {
            term *= q4 / (static_cast<long double>(k + 1) * (static_cast<long double>(k + 1) + shift));
            sum += term;
            if (std::abs(term) < 1e-24L * std::abs(sum) && k > 3) break;
        }
        return sum;
    };

    if (nu.real() == 0.0) {
        double t = nu.imag();
        complexd inv_g = std::exp(-lgamma_right(complexd(1.0, t)));
        cld S = series(cld(0.0L, static_cast<long double>(t)), inv_g);
        cld I = std::exp(cld(0.0L, static_cast<long double>(t) * lx)) * S;  // I_{it}(x)
        long double K = -static_cast<long double>(pi) * I.imag() /
                        std::sinh(static_cast<long double>(pi) * static_cast<long double>(t));
        return complexd(static_cast<double>(K), 0.0);
    }

    complexd inv_g_plus = std::exp(-lgamma_right(1.0 + nu));
    complexd inv_g_minus;
    if ((1.0 - nu).real() >= 0.5) {
        inv_g_minus = std::exp(-lgamma_right(1.0 - nu));
    } else {
        // 1/Gamma(1-nu) = Gamma(nu) sin(pi nu)/pi, all factors on the right half plane
        inv_g_minus = gamma_lanczos_half(nu) * std::sin(pi * nu) / pi;
    }
    cld Sp = series(nul, inv_g_plus);
    cld Sm = series(-nul, inv_g_minus);
    cld Ip = std::exp(nul * lx) * Sp;
    cld Im = std::exp(-nul * lx) * Sm;
    cld spn = std::sin(static_cast<long double>(pi) * nul);
    cld K = static_cast<long double>(pi) / 2.0L * (Im - Ip) / spn;
    return complexd(static_cast<double>(K.real()), static_cast<double>(K.imag()));
}

}  // namespace detail

// K_{order}(y).  Supported range: y > 0, |Im order| <= 100, |Re order| <= 10.
inline complexd bessel_k(complexd order, double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw validation_error("bessel_k: argument must be positive");
    if (std::abs(order.imag()) > 100.0 || std::abs(order.real()) > 10.0)
        throw capability_error("bessel_k: order outside supported range");
    complexd nu = order;
    if (nu.real() < 0.0) nu = -nu;            // K_{-nu} = K_nu
    bool conj_flip = nu.imag() < 0.0;         // K_{conj nu}(y) = conj K_nu(y)
    if (conj_flip) nu = std::conj(nu);
    double t = nu.imag();
    complexd val = (t <= 0.985 * y) ? detail::bessel_k_contour(nu.real(), t, y)
                                    : detail::bessel_k_series(nu, y);
    if (order.real() == 0.0) val = complexd(val.real(), 0.0);  // exactly real on the imaginary axis
    return conj_flip ? std::conj(val) : val;
}

}  // namespace eislab

#endif
