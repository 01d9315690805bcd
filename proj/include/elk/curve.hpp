#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <elk/bigint.hpp>
#include <elk/fp.hpp>
#include <elk/poly.hpp>
#include <elk/rng.hpp>

namespace elk {

// Short Weierstrass curve y^2 = x^3 + a x + b over the field context F.
// The context is held by value; it is cheap to copy.
template <class F>
struct Curve {
    using Elem = typename F::Elem;
    F k;
    Elem a, b;

    Curve(F field, Elem aa, Elem bb)
        : k(std::move(field)), a(std::move(aa)), b(std::move(bb)) {}

    // 4a^3 + 27b^2: the discriminant up to a factor -16, which is a unit for
    // every odd modulus used here.  Zero iff the curve is singular.
    Elem disc() const {
        Elem a3 = k.mul(k.mul(a, a), a);
        Elem b2 = k.mul(b, b);
        return k.add(k.mul(k.from_int(BigInt(4)), a3),
                     k.mul(k.from_int(BigInt(27)), b2));
    }

    Elem j_invariant() const {
        Elem d = disc();
        Elem a3 = k.mul(k.mul(a, a), a);
        Elem num = k.mul(k.from_int(BigInt(6912)), a3);
        return k.mul(num, k.inv(d));
    }

    // Right-hand side x^3 + a x + b.
    Elem rhs(const Elem& x) const {
        Elem x2 = k.mul(x, x);
        return k.add(k.add(k.mul(x2, x), k.mul(a, x)), b);
    }
};

template <class F>
struct Point {
    typename F::Elem x, y;
    bool inf = true;
};

template <class F>
Point<F> point_infinity(const F& k) {
    return Point<F>{k.zero(), k.zero(), true};
}

template <class F>
Point<F> point_affine(typename F::Elem x, typename F::Elem y) {
    return Point<F>{std::move(x), std::move(y), false};
}

template <class F>
bool on_curve(const Curve<F>& E, const Point<F>& P) {
    if (P.inf) return true;
    return E.k.eq(E.k.mul(P.y, P.y), E.rhs(P.x));
}

template <class F>
Point<F> ec_neg(const Curve<F>& E, const Point<F>& P) {
    if (P.inf) return P;
    return point_affine<F>(P.x, E.k.neg(P.y));
}

// Affine addition.  Slope inversions go through F::inv, so over Z/n with
// composite n a nontrivial gcd surfaces as NonInvertibleError.
template <class F>
Point<F> ec_add(const Curve<F>& E, const Point<F>& P, const Point<F>& Q) {
    const F& k = E.k;
    if (P.inf) return Q;
    if (Q.inf) return P;
    typename F::Elem lambda;
    if (k.eq(P.x, Q.x)) {
        if (!k.eq(P.y, Q.y) || k.is_zero(P.y)) return point_infinity(k);
        auto num = k.add(k.mul(k.from_int(BigInt(3)), k.mul(P.x, P.x)), E.a);
        lambda = k.mul(num, k.inv(k.mul(k.from_int(BigInt(2)), P.y)));
    } else {
        lambda = k.mul(k.sub(Q.y, P.y), k.inv(k.sub(Q.x, P.x)));
    }
    auto x3 = k.sub(k.sub(k.mul(lambda, lambda), P.x), Q.x);
    auto y3 = k.sub(k.mul(lambda, k.sub(P.x, x3)), P.y);
    return point_affine<F>(x3, y3);
}

template <class F>
Point<F> ec_mul(const Curve<F>& E, BigInt n, Point<F> P) {
    if (n < 0) {
        n = -n;
        P = ec_neg(E, P);
    }
    Point<F> acc = point_infinity(E.k);
    while (n != 0) {
        if ((n & 1) != 0) acc = ec_add(E, acc, P);
        P = ec_add(E, P, P);
        n >>= 1;
    }
    return acc;
}

// Square root mod an odd prime.  Returns nullopt for non-residues.  The loop
// structure terminates for any modulus, but correctness is only promised for
// prime p; callers on probabilistic paths re-check y^2 afterwards.
template <class F>
std::optional<typename F::Elem> tonelli_shanks(const F& k,
                                               const typename F::Elem& a) {
    if (k.is_zero(a)) return k.zero();
    BigInt p = k.modulus();
    auto euler = k.pow(a, (p - 1) / 2);
    if (!k.eq(euler, k.one())) return std::nullopt;
    if (p % 4 == 3) return k.pow(a, (p + 1) / 4);
    BigInt q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    auto z = k.one();
    for (BigInt c = 2;; ++c) {
        z = k.from_int(c);
        if (k.eq(k.pow(z, (p - 1) / 2), k.neg(k.one()))) break;
        if (c > 1000) return std::nullopt;  // not a prime modulus
    }
    unsigned m = s;
    auto cc = k.pow(z, q);
    auto t = k.pow(a, q);
    auto r = k.pow(a, (q + 1) / 2);
    while (!k.eq(t, k.one())) {
        auto t2 = t;
        unsigned i = 0;
        while (!k.eq(t2, k.one())) {
            t2 = k.mul(t2, t2);
            if (++i >= m) return std::nullopt;  // not a prime modulus
        }
        auto b = cc;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = k.mul(b, b);
        m = i;
        cc = k.mul(b, b);
        t = k.mul(t, cc);
        r = k.mul(r, b);
    }
    return r;
}

template <class F>
Point<F> ec_random_point(const Curve<F>& E, Rng& rng,
                         int max_tries = 256) {
    const F& k = E.k;
    BigInt p = k.modulus();
    for (int i = 0; i < max_tries; ++i) {
        auto x = k.from_int(rng.uniform_bigint(0, p - 1));
        auto v = E.rhs(x);
        auto y = tonelli_shanks(k, v);
        if (!y) continue;
        if (!k.eq(k.mul(*y, *y), v)) continue;  // composite-modulus artifact
        if (!k.is_zero(*y) && rng.coin()) y = k.neg(*y);
        return point_affine<F>(x, *y);
    }
    throw std::runtime_error("ec_random_point: no point found");
}

inline constexpr std::uint64_t kNaiveCountCap = std::uint64_t{1} << 26;

// Exhaustive point count: p + 1 + sum_x chi(x^3 + ax + b), with the residue
// character read off a squares bitmap.
inline std::uint64_t naive_count_u64(std::uint64_t p, std::uint64_t a,
                                     std::uint64_t b) {
    if (p < 3 || p > kNaiveCountCap)
        throw std::domain_error("naive_count_u64: modulus out of range");
    std::vector<bool> is_square(p, false);
    for (std::uint64_t x = 0; x < p; ++x)
        is_square[static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(x) * x % p)] = true;
    std::uint64_t n = p + 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t x2 = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(x) * x % p);
        std::uint64_t v = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x2) * x + a * static_cast<unsigned __int128>(x) + b) % p);
        if (v == 0) continue;
        n += is_square[v] ? 1 : std::uint64_t(-1);
    }
    return n;
}

// Quadratic twist by the smallest quadratic non-residue c: (a c^2, b c^3).
template <class F>
Curve<F> quadratic_twist(const Curve<F>& E) {
    const F& k = E.k;
    BigInt p = k.modulus();
    for (BigInt c = 2; c < p; ++c) {
        if (jacobi(c % p, p) == -1) {
            auto ce = k.from_int(c);
            auto c2 = k.mul(ce, ce);
            return Curve<F>(k, k.mul(E.a, c2), k.mul(E.b, k.mul(c2, ce)));
        }
    }
    throw std::runtime_error("quadratic_twist: no non-residue found");
}

// Pure-x parts b_k of the division polynomials: psi_k = b_k for odd k and
// psi_k = y b_k for even k, on y^2 = x^3 + ax + b.  Entries 0..kmax; reduced
// mod `mod` when given.
template <class F>
std::vector<Poly<F>> division_b_list(const Curve<F>& E, int kmax,
                                     const Poly<F>* mod = nullptr) {
    const F& k = E.k;
    auto red = [&](Poly<F> v) {
        return mod ? poly_rem(k, v, *mod) : std::move(v);
    };
    auto mulr = [&](const Poly<F>& u, const Poly<F>& v) {
        return red(poly_mul(k, u, v));
    };
    BigInt ai = k.to_int(E.a), bi = k.to_int(E.b);
    std::vector<Poly<F>> b(std::max(kmax + 1, 5));
    b[0] = poly_zero(k);
    b[1] = poly_one(k);
    b[2] = poly_const(k, k.from_int(BigInt(2)));
    {
        Poly<F> t;  // 3x^4 + 6a x^2 + 12b x - a^2
        t.c = {k.from_int(-ai * ai), k.from_int(12 * bi), k.from_int(6 * ai),
               k.zero(), k.from_int(BigInt(3))};
        poly_trim(k, t);
        b[3] = red(t);
    }
    {
        Poly<F> t;  // 4(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
        t.c = {k.from_int(4 * (-8 * bi * bi - ai * ai * ai)),
               k.from_int(-16 * ai * bi),
               k.from_int(-20 * ai * ai),
               k.from_int(80 * bi),
               k.from_int(20 * ai),
               k.zero(),
               k.from_int(BigInt(4))};
        poly_trim(k, t);
        b[4] = red(t);
    }
    Poly<F> f;
    f.c = {E.b, E.a, k.zero(), k.one()};
    poly_trim(k, f);
    Poly<F> f2 = red(poly_mul(k, f, f));
    f = red(f);
    auto inv2 = k.inv(k.from_int(BigInt(2)));
    for (int n = 5; n <= kmax; ++n) {
        int m = n / 2;
        if (n % 2 == 1) {
            Poly<F> m3 = mulr(b[m], mulr(b[m], b[m]));
            Poly<F> p13 = mulr(b[m + 1], mulr(b[m + 1], b[m + 1]));
            Poly<F> lhs = mulr(b[m + 2], m3);
            Poly<F> rhs = mulr(b[m - 1], p13);
            if (m % 2 == 0)
                b[n] = poly_sub(k, mulr(f2, lhs), rhs);
            else
                b[n] = poly_sub(k, lhs, mulr(f2, rhs));
        } else {
            Poly<F> u = mulr(b[m + 2], mulr(b[m - 1], b[m - 1]));
            Poly<F> v = mulr(b[m - 2], mulr(b[m + 1], b[m + 1]));
            b[n] = poly_scale(k, mulr(b[m], poly_sub(k, u, v)), inv2);
        }
    }
    b.resize(kmax + 1);
    return b;
}

// Supersingularity over the prime field: exact count below the naive cap,
// otherwise k rounds of [p+1]P tests.  On an ordinary curve a random point
// is killed by p+1 with probability <= 4*sqrt(p)/N, so 20 passing rounds
// above 2^26 leave one-sided error odds below 2^-200.
template <class F>
bool supersingular_test(const Curve<F>& E, Rng& rng, int rounds = 20) {
    const F& k = E.k;
    if (k.is_zero(E.disc()))
        throw std::domain_error("supersingular_test: singular curve");
    BigInt p = k.modulus();
    if (p <= kNaiveCountCap) {
        std::uint64_t pp = to_u64(p);
        std::uint64_t aa = to_u64(k.to_int(E.a));
        std::uint64_t bb = to_u64(k.to_int(E.b));
        return naive_count_u64(pp, aa, bb) == pp + 1;
    }
    for (int round = 0; round < rounds; ++round) {
        Point<F> P = ec_random_point(E, rng);
        if (!ec_mul(E, p + 1, P).inf) return false;
    }
    return true;
}

}  // namespace elk
