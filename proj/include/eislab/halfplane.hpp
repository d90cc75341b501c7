#ifndef EISLAB_HALFPLANE_HPP
#define EISLAB_HALFPLANE_HPP

// Upper-half-plane geometry: the groups SL2(Z) and Gamma_0(q), reduction to
// the standard fundamental domain F = { |x| <= 1/2, |z| >= 1 }, the two cusps
// of Gamma_0(q) for prime q, their scaling matrices, and the sets of allowed
// moduli C(kappa, kappa') of lower-left entries in sigma_kappa^{-1} Gamma_0(q)
// sigma_kappa'.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "eislab/common.hpp"

namespace eislab {

struct HalfPlanePoint {
    double x;
    double y;
    HalfPlanePoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0) || !std::isfinite(y) || !std::isfinite(x))
            throw validation_error("HalfPlanePoint: requires finite x and y > 0");
    }
    double norm2() const { return x * x + y * y; }
};

// 2x2 real matrix; scaling matrices carry irrational sqrt(q) entries.
struct GroupElement {
    double a, b, c, d;
    double det() const { return a * d - b * c; }
    GroupElement operator*(const GroupElement& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// 2x2 integer matrix with determinant 1; the exact arithmetic carrier.
struct IntMat {
    long long a = 1, b = 0, c = 0, d = 1;
    long long det() const { return a * d - b * c; }
    IntMat operator*(const IntMat& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    IntMat inverse() const { return {d, -b, -c, a}; }  // valid when det == 1
    GroupElement real() const {
        return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                static_cast<double>(d)};
    }
    bool operator==(const IntMat&) const = default;
};

inline const IntMat kIdentity{1, 0, 0, 1};
inline const IntMat kS{0, -1, 1, 0};
inline IntMat translation(long long n) { return {1, n, 0, 1}; }

enum class Cusp { Infinity, Zero };

inline HalfPlanePoint mobius_act(const GroupElement& g, const HalfPlanePoint& z) {
    double det = g.det();
    if (!(det > 0.0)) throw validation_error("mobius_act: determinant must be positive");
    double u = g.c * z.x + g.d;
    double v = g.c * z.y;
    double denom = u * u + v * v;
    if (denom < 1e-300) throw maps_to_cusp_error("mobius_act: point maps to the cusp at infinity");
    double nx = (g.a * z.x + g.b) * u + g.a * z.y * v;
    return HalfPlanePoint(nx / denom, det * z.y / denom);
}

inline HalfPlanePoint mobius_act(const IntMat& g, const HalfPlanePoint& z) {
    return mobius_act(g.real(), z);
}

// Reduce z into F.  Returns (z', g) with g in SL2(Z) and g z = z'.
// Boundary convention: x = +1/2 is folded to -1/2, and arc points with x > 0
// are folded to x < 0, so the representative is a function of the orbit.
inline std::pair<HalfPlanePoint, IntMat> reduce_to_fundamental_domain(HalfPlanePoint z) {
    IntMat g = kIdentity;
    for (int iter = 0; iter < 20000; ++iter) {
        double n = std::floor(z.x + 0.5);  // maps x into [-1/2, 1/2), so x = +1/2 folds left
        if (n != 0.0) {
            long long ni = static_cast<long long>(n);
            z = HalfPlanePoint(z.x - n, z.y);
            g = translation(-ni) * g;
        }
        double r2 = z.norm2();
        if (r2 < 1.0 || (r2 == 1.0 && z.x > 0.0)) {
            z = HalfPlanePoint(-z.x / r2, z.y / r2);
            g = kS * g;
            continue;
        }
        return {z, g};
    }
    throw capability_error("reduce_to_fundamental_domain: did not terminate");
}

inline bool in_fundamental_domain(const HalfPlanePoint& z, double slack = 1e-12) {
    return std::abs(z.x) <= 0.5 + slack && z.norm2() >= 1.0 - slack;
}

// sigma_infinity = identity, sigma_0 = (0, -1/sqrt(q); sqrt(q), 0).
// det = 1, maps infinity to the labelled cusp, and conjugates the cusp
// stabilizer to integer translations.
inline GroupElement scaling_matrix(Cusp kappa, long long q) {
    if (q < 1) throw validation_error("scaling_matrix: level must be >= 1");
    if (kappa == Cusp::Infinity) return {1.0, 0.0, 0.0, 1.0};
    if (q == 1) throw validation_error("scaling_matrix: level 1 has a single cusp");
    if (!is_prime(q)) throw validation_error("scaling_matrix: level must be 1 or prime");
    double rq = std::sqrt(static_cast<double>(q));
    return {0.0, -1.0 / rq, rq, 0.0};
}

inline bool is_in_gamma0(const IntMat& g, long long q) {
    if (q < 1) throw validation_error("is_in_gamma0: level must be >= 1");
    return g.det() == 1 && g.c % q == 0;
}

// Allowed moduli: all gamma in (0, bound] arising as lower-left entries of
// sigma_kappa^{-1} Gamma_0(q) sigma_kappa'.  Derived by enumerating the
// conjugated group elements directly:
//   (inf, inf): Gamma_0(q) itself                     -> positive multiples of q
//   (0, 0):     sigma_0^{-1} (a,b;c,d) sigma_0 = (d, -c/q; -bq, a)
//                                                     -> positive multiples of q
//   (inf, 0) and (0, inf): entries m sqrt(q) with gcd(m, q) = 1.
// Each candidate is certified by exhibiting a matrix via the extended gcd.
inline std::vector<double> allowed_moduli(Cusp kappa, Cusp kappa_prime, long long q, double bound) {
    if (!(bound > 0.0)) throw validation_error("allowed_moduli: bound must be positive");
    if (q != 1 && !is_prime(q)) throw validation_error("allowed_moduli: level must be 1 or prime");
    if (q == 1 && (kappa == Cusp::Zero || kappa_prime == Cusp::Zero))
        throw validation_error("allowed_moduli: level 1 has a single cusp");
    std::vector<double> out;
    bool mixed = (kappa != kappa_prime);
    if (!mixed) {
        // gamma = m q; completion (1, 0; m q, 1) for (inf, inf); for (0, 0) the
        // conjugate of (1, -m; 0, 1) has lower-left m q.
        for (long long m = 1; static_cast<double>(m) * static_cast<double>(q) <= bound; ++m)
            out.push_back(static_cast<double>(m * q));
    } else {
        // gamma = m sqrt(q); completion requires a d with m d = 1 (mod q),
        // which exists exactly when gcd(m, q) = 1.
        double rq = std::sqrt(static_cast<double>(q));
        for (long long m = 1; static_cast<double>(m) * rq <= bound; ++m)
            if (std::gcd(m, q) == 1) out.push_back(static_cast<double>(m) * rq);
    }
    return out;
}

// Right-coset invariant of h in Gamma_0(q) \ SL2(Z) for prime q:
// principal (h in Gamma_0(q)) or the translate S T^j, j = d c^{-1} mod q.
struct CosetClass {
    bool principal;
    long long j;  // meaningful when !principal
};

inline long long mod_inverse(long long a, long long q) {
    long long r0 = q, r1 = ((a % q) + q) % q, s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long k = r0 / r1;
        r0 -= k * r1;
        std::swap(r0, r1);
        s0 -= k * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) throw validation_error("mod_inverse: not invertible");
    return ((s0 % q) + q) % q;
}

inline CosetClass classify_coset(const IntMat& h, long long q) {
    if (h.det() != 1) throw validation_error("classify_coset: determinant must be 1");
    if (q == 1 || h.c % q == 0) return {true, 0};
    long long cinv = mod_inverse(h.c, q);
    long long j = ((h.d % q) * cinv) % q;
    return {false, ((j % q) + q) % q};
}

}  // namespace eislab

#endif
