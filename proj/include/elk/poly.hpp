#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <elk/bigint.hpp>
#include <elk/fp.hpp>
#include <elk/rng.hpp>

namespace elk {

// Dense univariate polynomial over the field context F.  Coefficient i of X^i
// sits at c[i]; the vector carries no trailing zeros, so the zero polynomial
// is the empty vector and deg() == -1.
template <class F>
struct Poly {
    using Elem = typename F::Elem;
    std::vector<Elem> c;

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

template <class F>
void poly_trim(const F& k, Poly<F>& a) {
    while (!a.c.empty() && k.is_zero(a.c.back())) a.c.pop_back();
}

template <class F>
Poly<F> poly_zero(const F&) {
    return {};
}

template <class F>
Poly<F> poly_const(const F& k, typename F::Elem v) {
    Poly<F> r;
    if (!k.is_zero(v)) r.c.push_back(v);
    return r;
}

template <class F>
Poly<F> poly_one(const F& k) {
    return poly_const(k, k.one());
}

template <class F>
Poly<F> poly_x(const F& k) {
    Poly<F> r;
    r.c = {k.zero(), k.one()};
    return r;
}

// Builds a polynomial from low-to-high coefficients given as integers.
template <class F>
Poly<F> poly_from_ints(const F& k, const std::vector<std::int64_t>& coeffs) {
    Poly<F> r;
    r.c.reserve(coeffs.size());
    for (auto v : coeffs) r.c.push_back(k.from_int(BigInt(v)));
    poly_trim(k, r);
    return r;
}

template <class F>
bool poly_eq(const F& k, const Poly<F>& a, const Poly<F>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!k.eq(a.c[i], b.c[i])) return false;
    return true;
}

template <class F>
Poly<F> poly_add(const F& k, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = k.add(r.c[i], b.c[i]);
    poly_trim(k, r);
    return r;
}

template <class F>
Poly<F> poly_sub(const F& k, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = k.sub(r.c[i], b.c[i]);
    poly_trim(k, r);
    return r;
}

template <class F>
Poly<F> poly_neg(const F& k, const Poly<F>& a) {
    Poly<F> r = a;
    for (auto& v : r.c) v = k.neg(v);
    return r;
}

template <class F>
Poly<F> poly_scale(const F& k, const Poly<F>& a, typename F::Elem s) {
    if (k.is_zero(s)) return {};
    Poly<F> r = a;
    for (auto& v : r.c) v = k.mul(v, s);
    poly_trim(k, r);
    return r;
}

// Schoolbook product.  Degrees stay small enough here (a few thousand at the
// very worst) that anything fancier would not pay for itself.
template <class F>
Poly<F> poly_mul(const F& k, const Poly<F>& a, const Poly<F>& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, k.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (k.is_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = k.add(r.c[i + j], k.mul(a.c[i], b.c[j]));
    }
    poly_trim(k, r);
    return r;
}

// Euclidean division.  The leading-coefficient inversion is the only place
// division happens, so over Z/n with composite n this throws
// NonInvertibleError exactly when a factor of n shows up.
template <class F>
std::pair<Poly<F>, Poly<F>> poly_divrem(const F& k, const Poly<F>& a,
                                        const Poly<F>& b) {
    if (b.is_zero()) throw std::domain_error("poly_divrem: division by zero");
    Poly<F> q, r = a;
    if (a.deg() < b.deg()) return {q, r};
    q.c.assign(a.c.size() - b.c.size() + 1, k.zero());
    auto lead_inv = k.inv(b.c.back());
    for (int i = r.deg(); i >= b.deg(); --i) {
        if (k.is_zero(r.c[i])) continue;
        auto f = k.mul(r.c[i], lead_inv);
        q.c[i - b.deg()] = f;
        for (int j = 0; j <= b.deg(); ++j)
            r.c[i - b.deg() + j] =
                k.sub(r.c[i - b.deg() + j], k.mul(f, b.c[j]));
    }
    poly_trim(k, q);
    poly_trim(k, r);
    return {q, r};
}

template <class F>
Poly<F> poly_rem(const F& k, const Poly<F>& a, const Poly<F>& b) {
    return poly_divrem(k, a, b).second;
}

template <class F>
Poly<F> poly_make_monic(const F& k, const Poly<F>& a) {
    if (a.is_zero()) return a;
    return poly_scale(k, a, k.inv(a.c.back()));
}

template <class F>
Poly<F> poly_gcd(const F& k, Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        Poly<F> r = poly_rem(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(k, a);
}

template <class F>
typename F::Elem poly_eval(const F& k, const Poly<F>& a,
                           typename F::Elem x) {
    auto acc = k.zero();
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it)
        acc = k.add(k.mul(acc, x), *it);
    return acc;
}

template <class F>
Poly<F> poly_derivative(const F& k, const Poly<F>& a) {
    Poly<F> r;
    for (std::size_t i = 1; i < a.c.size(); ++i)
        r.c.push_back(k.mul(a.c[i], k.from_int(BigInt(i))));
    poly_trim(k, r);
    return r;
}

template <class F>
Poly<F> poly_mulmod(const F& k, const Poly<F>& a, const Poly<F>& b,
                    const Poly<F>& m) {
    return poly_rem(k, poly_mul(k, a, b), m);
}

template <class F>
Poly<F> poly_powmod(const F& k, Poly<F> base, BigInt e, const Poly<F>& m) {
    if (e < 0) throw std::domain_error("poly_powmod: negative exponent");
    Poly<F> r = poly_rem(k, poly_one(k), m);
    base = poly_rem(k, base, m);
    while (e != 0) {
        if ((e & 1) != 0) r = poly_mulmod(k, r, base, m);
        base = poly_mulmod(k, base, base, m);
        e >>= 1;
    }
    return r;
}

// Inverse of u in F[X]/(m) by the extended Euclidean algorithm.  Throws
// std::domain_error when gcd(u, m) is nonconstant (u not invertible).
template <class F>
Poly<F> poly_inv_mod(const F& k, const Poly<F>& u, const Poly<F>& m) {
    Poly<F> r0 = m, r1 = poly_rem(k, u, m);
    Poly<F> t0 = poly_zero(k), t1 = poly_one(k);
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divrem(k, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
        Poly<F> t2 = poly_sub(k, t0, poly_mul(k, q, t1));
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.deg() != 0)
        throw std::domain_error("poly_inv_mod: element not invertible");
    return poly_rem(k, poly_scale(k, t0, k.inv(r0.c[0])), m);
}

// X^(p^e) mod m, built by e successive p-th powers of the running residue.
template <class F>
Poly<F> frobenius_power(const F& k, const Poly<F>& m, unsigned e = 1) {
    Poly<F> r = poly_rem(k, poly_x(k), m);
    for (unsigned i = 0; i < e; ++i) r = poly_powmod(k, r, k.modulus(), m);
    return r;
}

template <class F>
Poly<F> poly_from_roots(const F& k,
                        const std::vector<typename F::Elem>& roots) {
    Poly<F> r = poly_one(k);
    for (const auto& x : roots) {
        Poly<F> lin;
        lin.c = {k.neg(x), k.one()};
        r = poly_mul(k, r, lin);
    }
    return r;
}

// One root in the base field of a polynomial that splits into distinct linear
// factors (callers pass gcd(X^p - X, f) outputs).  Equal-degree splitting
// with random shifts; tiny fields fall back to a direct scan.
template <class F>
std::optional<typename F::Elem> poly_find_root(const F& k, Poly<F> f,
                                               Rng& rng) {
    f = poly_make_monic(k, f);
    if (f.deg() < 1) return std::nullopt;
    if (f.deg() == 1) return k.neg(f.c[0]);
    BigInt p = k.modulus();
    if (p < 64) {
        for (BigInt x = 0; x < p; ++x) {
            auto e = k.from_int(x);
            if (k.is_zero(poly_eval(k, f, e))) return e;
        }
        return std::nullopt;
    }
    BigInt half = (p - 1) / 2;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Poly<F> shift;
        shift.c = {k.from_int(rng.uniform_bigint(0, p - 1)), k.one()};
        Poly<F> s = poly_powmod(k, shift, half, f);
        s = poly_sub(k, s, poly_one(k));
        Poly<F> g = poly_gcd(k, s, f);
        if (g.deg() >= 1 && g.deg() < f.deg()) {
            if (2 * g.deg() <= f.deg())
                f = g;
            else
                f = poly_divrem(k, f, g).first;
            if (f.deg() == 1) return k.neg(f.c[0]);
        }
    }
    throw std::runtime_error("poly_find_root: splitting did not converge");
}

// One monic irreducible factor of smallest degree.  Distinct-degree sieve
// locates the degree, then equal-degree splitting isolates a single factor.
// The input must be squarefree.
template <class F>
Poly<F> poly_min_irreducible_factor(const F& k, const Poly<F>& f, Rng& rng) {
    if (f.deg() < 1)
        throw std::domain_error("poly_min_irreducible_factor: constant input");
    BigInt p = k.modulus();
    Poly<F> frob = poly_rem(k, poly_x(k), f);
    int e = 0;
    Poly<F> g;
    while (true) {
        ++e;
        frob = poly_powmod(k, frob, p, f);
        g = poly_gcd(k, poly_sub(k, frob, poly_x(k)), f);
        if (g.deg() >= 1) break;
        if (e > f.deg())
            throw std::runtime_error(
                "poly_min_irreducible_factor: sieve overran");
    }
    // g is a product of irreducible factors, all of degree e.
    BigInt half = (boost::multiprecision::pow(BigInt(p), e) - 1) / 2;
    int guard = 0;
    while (g.deg() > e) {
        if (++guard > 128)
            throw std::runtime_error(
                "poly_min_irreducible_factor: splitting did not converge");
        Poly<F> r;
        r.c.reserve(g.c.size());
        for (int i = 0; i < g.deg(); ++i)
            r.c.push_back(k.from_int(rng.uniform_bigint(0, p - 1)));
        poly_trim(k, r);
        if (r.is_zero()) continue;
        Poly<F> s = poly_powmod(k, r, half, g);
        s = poly_sub(k, s, poly_one(k));
        Poly<F> h = poly_gcd(k, s, g);
        if (h.deg() >= 1 && h.deg() < g.deg())
            g = h.deg() <= g.deg() - h.deg() ? h
                                             : poly_divrem(k, g, h).first;
    }
    return poly_make_monic(k, g);
}

}  // namespace elk
