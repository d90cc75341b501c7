#ifndef EISLAB_EISENSTEIN_HPP
#define EISLAB_EISENSTEIN_HPP

// Fourier expansion and evaluation of the real-analytic Eisenstein series
// E_{q,kappa}(z, s) on Gamma_0(q) for q = 1 or q prime, cusps infinity and 0,
// trivial character.
//
// Expansion at a cusp kappa' in the local coordinate w = u + iv:
//
//   E_kappa(sigma_{kappa'} w, s) = delta v^s + phi v^{1-s}
//        + sum_{n != 0} a_n 2 sqrt(|n| v) K_{s-1/2}(2 pi |n| v) e(n u),
//
// with a_n carrying the factor |n|^{s-1} (even in n, so a_n = a_{-n}).  The
// coefficient sums over the allowed moduli close into divisor sums times
// zeta quotients; the level-q local factor is assembled from the restricted
// Ramanujan sums at powers of q (a finite sum), with the common factor
// sigma_{1-2s}(q^{v_q(n)}) cancelled so no spurious small denominators occur:
//
//   diag (kappa at its own cusp):
//     a_n = pi^s/Gamma(s) |n|^{s-1} R(n) sigma_{1-2s}(n0) / (zeta(2s)(1-q^{-2s}))
//     with R(n) = sum_{e=1}^{v_q(n)+1} r_{q^e}(n) q^{-2se},  n0 = prime-to-q part
//   off-diagonal (kappa at the other cusp): R(n) replaced by q^{-s}.
//
// Constant terms (the scattering entries, for prime q):
//     phi_diag = sqrt(pi) Gamma(s-1/2)/Gamma(s) zeta(2s-1)/zeta(2s) (q-1)/(q^{2s}-1)
//     phi_off  = ... (q^s - q^{1-s})/(q^{2s}-1)
// which form a unitary 2x2 matrix on the critical line.
//
// Everything is certified against the direct coset-sum oracle at Re(s) = 2.

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "eislab/common.hpp"
#include "eislab/halfplane.hpp"
#include "eislab/specfun.hpp"

namespace eislab {

namespace detail {

inline void validate_level(long long q) {
    if (q != 1 && !is_prime(q)) throw validation_error("level must be 1 or prime");
}

inline void validate_level_cusp(long long q, Cusp c) {
    validate_level(q);
    if (q == 1 && c == Cusp::Zero) throw validation_error("level 1 has a single cusp");
}

// r_{q^e}(n) for prime q: the only surviving divisors in
// sum_{d | gcd(q^e, n)} d mu(q^e/d) are d = q^e and d = q^{e-1}.
inline double ramanujan_prime_power(long long q, int e, int alpha) {
    double r = 0.0;
    if (e <= alpha) r += std::pow(static_cast<double>(q), e);
    if (e - 1 <= alpha) r -= std::pow(static_cast<double>(q), e - 1);
    return r;
}

inline int valuation(long long n, long long q) {
    int a = 0;
    while (n % q == 0) { n /= q; ++a; }
    return a;
}

}  // namespace detail

// sqrt(pi) Gamma(s - 1/2) / Gamma(s)
inline complexd constant_term_weight(complexd s) {
    return std::sqrt(pi) * gamma_c(s - 0.5) / gamma_c(s);
}

inline void guard_zeta2s(complexd zeta2s) {
    if (std::abs(zeta2s) < 1e-3)
        throw conditioning_error("cusp_expansion: zeta(2s) too close to zero");
}

struct FourierExpansion {
    long long q;
    Cusp cusp;        // which series E_{q,cusp}
    Cusp at;          // the cusp whose local coordinate the expansion lives in
    complexd s;
    complexd c_plus;  // coefficient of v^s (1 when cusp == at, else 0)
    complexd c_minus; // coefficient of v^{1-s}
    int truncation = 0;
    std::vector<complexd> a;  // a[n-1] = a_n = a_{-n}, 1 <= n <= truncation

    complexd mode(long long n) const {
        long long m = std::llabs(n);
        if (m < 1 || m > truncation) throw validation_error("mode index out of range");
        return a[static_cast<std::size_t>(m - 1)];
    }
};

namespace detail {

struct ExpansionBasis {
    long long q;
    complexd s;
    complexd zeta2s, zeta2sm1;
    complexd x;          // q^{-2s}
    complexd qms;        // q^{-s}
    complexd denomfac;   // zeta(2s) (1 - q^{-2s}); zeta(2s) at level 1
    complexd pis_over_gamma;  // pi^s / Gamma(s)

    ExpansionBasis(long long q_, complexd s_) : q(q_), s(s_) {
        zeta2s = zeta(2.0 * s);
        guard_zeta2s(zeta2s);
        zeta2sm1 = zeta(2.0 * s - 1.0);
        double lnq = std::log(static_cast<double>(q));
        x = std::exp(-2.0 * s * lnq);
        qms = std::exp(-s * lnq);
        denomfac = (q == 1) ? zeta2s : zeta2s * (1.0 - x);
        pis_over_gamma = std::exp(s * std::log(pi)) / gamma_c(s);
    }

    complexd mode_coefficient(bool diagonal, long long n) const {
        complexd znum;
        long long n0 = n;
        if (q == 1) {
            znum = 1.0;
        } else {
            int alpha = valuation(n, q);
            for (int i = 0; i < alpha; ++i) n0 /= q;
            if (diagonal) {
                complexd r = 0.0, xe = 1.0;
                for (int e = 1; e <= alpha + 1; ++e) {
                    xe *= x;
                    r += ramanujan_prime_power(q, e, alpha) * xe;
                }
                znum = r;
            } else {
                znum = qms;
            }
        }
        complexd sig = divisor_sigma(1.0 - 2.0 * s, n0);
        complexd npow = std::exp((s - 1.0) * std::log(static_cast<double>(n)));  // |n|^{s-1}
        return pis_over_gamma * npow * znum * sig / denomfac;
    }

    complexd constant_term(bool diagonal) const {
        complexd w = constant_term_weight(s) * zeta2sm1 / zeta2s;
        if (q == 1) return w;
        complexd q2s = std::exp(2.0 * s * std::log(static_cast<double>(q)));
        complexd qs = std::exp(s * std::log(static_cast<double>(q)));
        if (diagonal) return w * (static_cast<double>(q) - 1.0) / (q2s - 1.0);
        return w * (qs - static_cast<double>(q) / qs) / (q2s - 1.0);  // (q^s - q^{1-s})/(q^{2s}-1)
    }
};

}  // namespace detail

// Expansion of E_{q,kappa} at the cusp `at` (infinity by default), modes up
// to |n| = N.  Pre: s != 1, s away from zeros of zeta(2s), and not the
// central point (where the series vanishes identically and the v^{1-s}
// coefficient degenerates to a limit).
inline FourierExpansion cusp_expansion(long long q, Cusp kappa, complexd s, int N,
                                       Cusp at = Cusp::Infinity) {
    detail::validate_level_cusp(q, kappa);
    if (q == 1 && at == Cusp::Zero) throw validation_error("level 1 has a single cusp");
    if (N < 1) throw validation_error("cusp_expansion: truncation must be >= 1");
    if (std::abs(s - 1.0) < 1e-10) throw pole_error("cusp_expansion: pole at s = 1");
    if (std::abs(s - 0.5) < 1e-6)
        throw conditioning_error("cusp_expansion: expansion degenerates at the central point");
    detail::ExpansionBasis basis(q, s);
    bool diagonal = (kappa == at);
    FourierExpansion e;
    e.q = q;
    e.cusp = kappa;
    e.at = at;
    e.s = s;
    e.c_plus = diagonal ? 1.0 : 0.0;
    e.c_minus = basis.constant_term(diagonal);
    e.truncation = N;
    e.a.resize(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n)
        e.a[static_cast<std::size_t>(n - 1)] = basis.mode_coefficient(diagonal, n);
    return e;
}

// Scattering matrix Phi(s) for prime q: entries are the v^{1-s} constant-term
// coefficients across cusp pairs (Infinity, Zero) x (Infinity, Zero).
inline std::array<std::array<complexd, 2>, 2> scattering_matrix(long long q, complexd s) {
    if (!is_prime(q)) throw validation_error("scattering_matrix: level must be prime");
    detail::ExpansionBasis basis(q, s);
    complexd d = basis.constant_term(true);
    complexd o = basis.constant_term(false);
    return {{{d, o}, {o, d}}};
}

inline complexd scattering_level1(complexd s) {
    detail::ExpansionBasis basis(1, s);
    return basis.constant_term(true);
}

// ---------------------------------------------------------------------------
// direct coset-sum oracle (absolutely convergent range)
// ---------------------------------------------------------------------------

struct CosetSumResult {
    complexd value;
    double tail;  // rigorous bound on the dropped mass (moduli beyond `bound`
                  // plus the truncated inner sums)
};

// Partial sum of Im(sigma_kappa^{-1} gamma z)^s over distinct cosets whose
// lower-left entry is at most `bound`, plus a tail bound.
//
//   kappa = inf:  y^s + sum_{c = mq <= bound} sum_{gcd(d,c)=1} (y/|cz+d|^2)^s
//   kappa = 0:    sum_{a sqrt(q) <= bound, gcd(a,q)=1} sum_{gcd(b,a)=1}
//                     (y/(q |az+b|^2))^s
inline CosetSumResult coset_sum_eval(long long q, Cusp kappa, const HalfPlanePoint& z, complexd s,
                                     double bound) {
    detail::validate_level_cusp(q, kappa);
    if (s.real() < 1.5) throw validation_error("coset_sum_eval: requires Re(s) >= 1.5");
    if (!(bound > 0.0)) throw validation_error("coset_sum_eval: bound must be positive");
    const double sigma = s.real();
    const double y = z.y, x = z.x;
    const double gauss = std::sqrt(pi) * gamma_c(complexd(sigma - 0.5)).real() /
                         gamma_c(complexd(sigma)).real();  // int (1+u^2)^{-sigma} du

    complexd value = 0.0;
    double tail = 0.0;

    auto inner_sum = [&](double cc, long long coprime_to, double weight_y, double eps_d) {
        // sum over integers d coprime to `coprime_to` of (weight_y/|cc z + d|^2)^s,
        // truncated to |cc x + d| <= W with a tail bound folded into `tail`.
        double p = 2.0 * sigma - 1.0;
        double W = std::max(3.0 * cc * (std::abs(x) + y + 1.0),
                            1.0 + std::pow(4.0 * std::pow(weight_y, sigma) / (p * eps_d), 1.0 / p));
        long long dlo = static_cast<long long>(std::floor(-cc * x - W));
        long long dhi = static_cast<long long>(std::ceil(-cc * x + W));
        complexd acc = 0.0;
        for (long long d = dlo; d <= dhi; ++d) {
            if (std::gcd(static_cast<long long>(std::llabs(d)), coprime_to) != 1) continue;
            double u = cc * x + static_cast<double>(d);
            double m2 = u * u + cc * cc * y * y;
            acc += std::exp(s * std::log(weight_y / m2));
        }
        tail += 2.0 * std::pow(weight_y, sigma) * std::pow(W - 1.0, 1.0 - 2.0 * sigma) /
                (2.0 * sigma - 1.0);
        return acc;
    };

    if (kappa == Cusp::Infinity) {
        value = std::exp(s * std::log(y));  // identity coset
        long long M = static_cast<long long>(std::floor(bound / static_cast<double>(q)));
        for (long long m = 1; m <= M; ++m) {
            double c = static_cast<double>(m * q);
            double eps_d = 1e-10 / static_cast<double>(m * m);
            value += inner_sum(c, m * q, y, eps_d);
        }
        // moduli tail: c = mq > bound
        double Mq = std::max(1.0, std::floor(bound / static_cast<double>(q)));
        double qy = static_cast<double>(q) * y;
        double t1 = 3.0 * std::pow(y, sigma) * std::pow(qy, -2.0 * sigma) *
                    std::pow(Mq, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
        double t2 = std::pow(y, sigma) * gauss * std::pow(qy, 1.0 - 2.0 * sigma) *
                    std::pow(Mq, 2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0);
        tail += t1 + t2;
    } else {
        double rq = std::sqrt(static_cast<double>(q));
        long long A = static_cast<long long>(std::floor(bound / rq));
        for (long long a = 1; a <= A; ++a) {
            if (a % q == 0) continue;
            double eps_d = 1e-10 / static_cast<double>(a * a);
            value += inner_sum(static_cast<double>(a), a, y / static_cast<double>(q), eps_d);
        }
        double A1 = std::max(1.0, std::floor(bound / rq));
        double yq = y / static_cast<double>(q);
        double t1 = 3.0 * std::pow(yq, sigma) * std::pow(y, -2.0 * sigma) *
                    std::pow(A1, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
        double t2 = std::pow(yq, sigma) * gauss * std::pow(y, 1.0 - 2.0 * sigma) *
                    std::pow(A1, 2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0);
        tail += t1 + t2;
    }
    return {value, tail};
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

// Evaluator for E_{q,kappa}(., s): holds the expansions at both cusps and a
// K-Bessel memo.  Points with small height are routed through SL2(Z)
// reduction; a non-principal coset lands in the neighbourhood of the cusp 0,
// where the local height of the reduced point is y1/q >= sqrt(3)/(2q).
// Expansions are immutable once built; the caches are guarded by a mutex, so
// values are independent of evaluation order.
class EisensteinEvaluator {
  public:
    EisensteinEvaluator(long long q, Cusp cusp, complexd s, double tol = 1e-10)
        : q_(q), cusp_(cusp), s_(s), tol_(tol) {
        detail::validate_level_cusp(q, cusp);
        if (!(tol > 0.0)) throw validation_error("tolerance must be positive");
        central_ = std::abs(s - 0.5) < 1e-6;
        if (!central_) {
            if (std::abs(s - 1.0) < 1e-10) throw pole_error("eval: pole at s = 1");
            basis_ = std::make_shared<detail::ExpansionBasis>(q, s);
        }
    }

    long long level() const { return q_; }
    Cusp cusp() const { return cusp_; }
    complexd parameter() const { return s_; }

    complexd eval(const HalfPlanePoint& z) const {
        if (central_) return 0.0;  // E(z, 1/2) vanishes identically (Phi(1/2) = -I)
        if (z.y >= sqrt3_over_2) return eval_local(Cusp::Infinity, z.x, z.y);
        auto [w1, g] = reduce_to_fundamental_domain(z);
        auto cls = classify_coset(g.inverse(), q_);
        if (cls.principal) return eval_local(Cusp::Infinity, w1.x, w1.y);
        double v0 = w1.y / static_cast<double>(q_);
        if (z.y >= v0) return eval_local(Cusp::Infinity, z.x, z.y);
        double u0 = (w1.x + static_cast<double>(cls.j)) / static_cast<double>(q_);
        return eval_local(Cusp::Zero, u0, v0);
    }

    double abs2(const HalfPlanePoint& z) const { return std::norm(eval(z)); }

    // number of modes needed at height v, and the tail bound actually used
    int modes_needed(double v) const { return plan(v).first; }
    double tail_bound(double v) const { return plan(v).second; }

  private:
    long long q_;
    Cusp cusp_;
    complexd s_;
    double tol_;
    bool central_ = false;
    std::shared_ptr<detail::ExpansionBasis> basis_;

    mutable std::mutex lock_;
    mutable std::map<Cusp, FourierExpansion> expansions_;
    mutable std::unordered_map<std::uint64_t, complexd> kcache_;

    // majorant of one mode term: 2 |a_n| exp(-2 pi n v + mu'^2/(4 pi n v)),
    // using 2 sqrt(nv) |K_{mu'+i t'}(2 pi n v)| <= exp(-2 pi n v + ...)
    double mode_majorant(long long n, double v) const {
        double sr = s_.real();
        double mu = std::abs(sr - 0.5);
        double c1 = std::max(0.0, 1.0 - 2.0 * sr);
        double dn = 2.0 * std::sqrt(static_cast<double>(n)) *
                    (std::log2(static_cast<double>(n)) + 2.0);  // >= d(n)(alpha+2)
        double prefix = std::abs(basis_->pis_over_gamma) / std::abs(basis_->denomfac);
        if (q_ > 1) prefix *= std::max(1.0, std::abs(basis_->qms));
        double npow = std::pow(static_cast<double>(n), sr - 1.0 + c1);
        double w = 2.0 * pi * static_cast<double>(n) * v;
        return 2.0 * prefix * dn * npow * std::exp(-w + mu * mu / (2.0 * w));
    }

    std::pair<int, double> plan(double v) const {
        for (long long n = 1; n <= 20000; ++n) {
            double m = mode_majorant(n + 1, v);
            double ratio = mode_majorant(n + 2, v) / (m + 1e-320);
            if (ratio < 0.95 && m / (1.0 - ratio) < tol_)
                return {static_cast<int>(n), m / (1.0 - ratio)};
        }
        throw capability_error("eval: mode truncation would exceed the supported budget");
    }

    const FourierExpansion& expansion(Cusp at, int N) const {
        auto it = expansions_.find(at);
        if (it == expansions_.end() || it->second.truncation < N) {
            FourierExpansion e = cusp_expansion(q_, cusp_, s_, N, at);
            expansions_[at] = std::move(e);
            it = expansions_.find(at);
        }
        return it->second;
    }

    complexd kbessel_cached(long long n, double w) const {
        std::uint64_t bits;
        static_assert(sizeof(double) == sizeof(std::uint64_t));
        std::memcpy(&bits, &w, sizeof(bits));
        std::uint64_t key = bits ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull);
        auto it = kcache_.find(key);
        if (it != kcache_.end()) return it->second;
        complexd val = bessel_k(s_ - 0.5, w);
        kcache_.emplace(key, val);
        return val;
    }

    complexd eval_local(Cusp at, double u, double v) const {
        std::scoped_lock guard(lock_);
        auto [N, tail] = plan(v);
        const FourierExpansion& e = expansion(at, N);
        complexd total = e.c_plus * std::exp(s_ * std::log(v)) +
                         e.c_minus * std::exp((1.0 - s_) * std::log(v));
        for (long long n = 1; n <= N; ++n) {
            double w = 2.0 * pi * static_cast<double>(n) * v;
            complexd K = kbessel_cached(n, w);
            double cosx = std::cos(2.0 * pi * static_cast<double>(n) * u);
            total += e.mode(n) * 2.0 * std::sqrt(static_cast<double>(n) * v) * K * 2.0 * cosx;
        }
        return total;
    }
};

// One-shot wrappers matching the operation signatures.

inline complexd eval_eisenstein(long long q, Cusp kappa, const HalfPlanePoint& z, complexd s,
                                double tol = 1e-10) {
    if (tol < 1e-12) throw validation_error("eval_eisenstein: tolerance below supported floor");
    return EisensteinEvaluator(q, kappa, s, tol).eval(z);
}

inline double eval_abs2(long long q, Cusp kappa, const HalfPlanePoint& z, double t,
                        double tol = 1e-10) {
    return EisensteinEvaluator(q, kappa, complexd(0.5, t), tol).abs2(z);
}

}  // namespace eislab

#endif
