#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <elk/bigint.hpp>
#include <elk/curve.hpp>
#include <elk/fp.hpp>
#include <elk/modpoly.hpp>
#include <elk/poly.hpp>
#include <elk/rng.hpp>

namespace elk {

enum class PrimeKind { Atkin, Elkies, SkippedDegenerate };

// Per-level ledger entry.  For odd Elkies levels jhat/lambda/kernel are
// populated; level 2 is Elkies-kind with only t_mod meaningful.
struct PrimeOutcome {
    unsigned ell = 0;
    PrimeKind kind = PrimeKind::Atkin;
    BigInt jhat = 0;
    unsigned lambda = 0;           // eigenvalue in [1, ell-1]; 0 when absent
    unsigned t_mod = 0;            // trace residue in [0, ell)
    std::vector<BigInt> kernel;    // monic kernel poly, coeffs low..high
};

enum class CountStatus {
    Counted,
    CompositeDetected,
    Singular,
    TraceOutOfRange,
    DatabaseExhausted,
    AbortCompositeOrder,
};

inline const char* to_string(CountStatus s) {
    switch (s) {
        case CountStatus::Counted: return "Counted";
        case CountStatus::CompositeDetected: return "CompositeDetected";
        case CountStatus::Singular: return "Singular";
        case CountStatus::TraceOutOfRange: return "TraceOutOfRange";
        case CountStatus::DatabaseExhausted: return "DatabaseExhausted";
        case CountStatus::AbortCompositeOrder: return "AbortCompositeOrder";
    }
    return "?";
}

struct CountResult {
    BigInt n = 0;                  // #E(F_p); 0 unless status == Counted
    CountStatus status = CountStatus::TraceOutOfRange;
    std::vector<PrimeOutcome> outcomes;
    BigInt modulus = 1;            // product M of the Elkies levels used
    BigInt trace = 0;
    bool supersingular = false;
    unsigned mr_rounds = 0;        // interleaved compositeness rounds spent
    unsigned elkies_levels = 0;    // Elkies-kind levels processed
};

struct SeaOptions {
    bool early_abort = false;
    int ss_rounds = 20;
};

inline unsigned next_small_prime(unsigned n) {
    for (unsigned c = n + 1;; ++c) {
        bool ok = c > 1;
        for (unsigned d = 2; d * d <= c; ++d)
            if (c % d == 0) {
                ok = false;
                break;
            }
        if (ok) return c;
    }
}

template <class F>
struct KernelResult {
    Poly<F> h;
    typename F::Elem atilde, btilde;  // coefficients of the isogenous curve
};

namespace detail {

// Coefficients c_k of the Weierstrass series p(z) = z^-2 + sum c_k z^2k
// for y^2 = x^3 + ax + b, up to index kmax.
template <class F>
std::vector<typename F::Elem> weierstrass_coeffs(const F& k,
                                                 const typename F::Elem& a,
                                                 const typename F::Elem& b,
                                                 int kmax) {
    std::vector<typename F::Elem> c(std::max(kmax + 1, 3), k.zero());
    if (kmax >= 1) c[1] = k.mul(k.neg(a), k.inv(k.from_int(BigInt(5))));
    if (kmax >= 2) c[2] = k.mul(k.neg(b), k.inv(k.from_int(BigInt(7))));
    for (int n = 3; n <= kmax; ++n) {
        auto s = k.zero();
        for (int h = 1; h <= n - 2; ++h)
            s = k.add(s, k.mul(c[h], c[n - 1 - h]));
        auto den = k.from_int(BigInt(n - 2) * (2 * n + 3));
        c[n] = k.mul(k.mul(k.from_int(BigInt(3)), s), k.inv(den));
    }
    c.resize(kmax + 1);
    return c;
}

// Elkies kernel via the partial derivatives of the modular polynomial.
// Returns nullopt when a route guard fails (callers fall back to the torsion
// route); never returns a wrong kernel for prime p -- exact identities only.
template <class F>
std::optional<KernelResult<F>> analytic_kernel(const Curve<F>& E,
                                               unsigned ell,
                                               const typename F::Elem& jhat,
                                               const ModPoly& phi) {
    const F& k = E.k;
    if (k.modulus() <= 8 * BigInt(ell)) return std::nullopt;
    int d = static_cast<int>(ell - 1) / 2;
    auto j = E.j_invariant();
    auto c1728 = k.from_int(BigInt(1728));
    if (k.is_zero(j) || k.eq(j, c1728)) return std::nullopt;
    if (k.is_zero(jhat) || k.eq(jhat, c1728)) return std::nullopt;
    PhiPartials<F> P = phi_partials_at(k, phi, j, jhat);
    if (k.is_zero(P.px) || k.is_zero(P.py)) return std::nullopt;

    auto le = k.from_int(BigInt(ell));
    auto E4 = k.mul(k.from_int(BigInt(-48)), E.a);
    auto E6 = k.mul(k.from_int(BigInt(864)), E.b);
    auto delta = k.mul(k.from_int(BigInt(-16)), E.disc());
    auto Dj = k.neg(k.mul(k.mul(k.mul(E4, E4), E6), k.inv(delta)));
    // first derivative of phi(j, jhat) = 0 along the q-line
    auto Djhat = k.neg(
        k.mul(k.mul(Dj, P.px), k.inv(k.mul(le, P.py))));
    auto jh1728 = k.sub(jhat, c1728);
    auto E4h = k.mul(k.mul(Djhat, Djhat), k.inv(k.mul(jhat, jh1728)));
    auto E6h = k.neg(k.mul(k.mul(Djhat, E4h), k.inv(jhat)));
    auto deltah = k.mul(k.mul(k.mul(E4h, E4h), E4h), k.inv(jhat));
    if (!k.eq(k.mul(E6h, E6h), k.mul(deltah, jh1728)))
        return std::nullopt;  // inconsistent point; not a plain Elkies root
    auto ell2 = k.mul(le, le);
    auto ell4 = k.mul(ell2, ell2);
    auto atil = k.neg(k.mul(k.mul(ell4, E4h), k.inv(k.from_int(BigInt(48)))));
    auto btil =
        k.mul(k.mul(k.mul(ell4, ell2), E6h), k.inv(k.from_int(BigInt(864))));

    // second derivative: recovers E2 - ell*E2hat, hence the power sum p1
    auto Dyq = k.mul(le, Djhat);
    auto seven6 = k.mul(k.from_int(BigInt(7)), k.inv(k.from_int(BigInt(6))));
    auto c1152 = k.from_int(BigInt(1152));
    auto term = k.mul(P.pxx, k.mul(Dj, Dj));
    term = k.add(term, k.mul(k.from_int(BigInt(2)),
                             k.mul(P.pxy, k.mul(Dj, Dyq))));
    term = k.add(term, k.mul(P.pyy, k.mul(Dyq, Dyq)));
    term = k.add(term, k.mul(k.mul(P.px, E4),
                             k.sub(k.mul(seven6, j), c1152)));
    term = k.add(term, k.mul(k.mul(P.py, k.mul(ell2, E4h)),
                             k.sub(k.mul(seven6, jhat), c1152)));
    auto e2diff = k.neg(k.mul(k.mul(k.from_int(BigInt(6)), term),
                              k.inv(k.mul(P.px, Dj))));
    auto p1 = k.mul(k.mul(le, e2diff), k.inv(k.from_int(BigInt(24))));

    Poly<F> h;
    if (d == 1) {
        h.c = {k.neg(p1), k.one()};
        return KernelResult<F>{std::move(h), atil, btil};
    }

    // kernel polynomial from the log-series of z^(2d) h(p(z))
    auto c = weierstrass_coeffs(k, E.a, E.b, d);
    auto ct = weierstrass_coeffs(k, atil, btil, d);
    std::vector<typename F::Elem> A(d + 1, k.zero());
    A[1] = k.neg(p1);
    for (int m = 2; m <= d; ++m) {
        auto num = k.sub(k.mul(le, c[m - 1]), ct[m - 1]);
        A[m] = k.mul(num, k.inv(k.from_int(BigInt(2 * m - 1) * (2 * m))));
    }
    std::vector<typename F::Elem> H(d + 1, k.zero());
    H[0] = k.one();
    for (int m = 1; m <= d; ++m) {
        auto s = k.zero();
        for (int i = 1; i <= m; ++i)
            s = k.add(s, k.mul(k.mul(k.from_int(BigInt(i)), A[i]),
                               H[m - i]));
        H[m] = k.mul(s, k.inv(k.from_int(BigInt(m))));
    }
    // Q[m][r] = coefficient of u^r in (u p(z))^m with u = z^2
    std::vector<typename F::Elem> base(d + 1, k.zero());
    base[0] = k.one();
    for (int t = 1; t + 1 <= d; ++t) base[t + 1] = c[t];
    std::vector<std::vector<typename F::Elem>> Q(d + 1);
    Q[0].assign(d + 1, k.zero());
    Q[0][0] = k.one();
    for (int m = 1; m <= d; ++m) {
        Q[m].assign(d + 1, k.zero());
        for (int i = 0; i <= d; ++i) {
            if (k.is_zero(Q[m - 1][i])) continue;
            for (int t = 0; i + t <= d; ++t)
                Q[m][i + t] =
                    k.add(Q[m][i + t], k.mul(Q[m - 1][i], base[t]));
        }
    }
    h.c.assign(d + 1, k.zero());
    h.c[d] = k.one();
    for (int r = 1; r <= d; ++r) {
        auto v = H[r];
        for (int s = 0; s < r; ++s)
            v = k.sub(v, k.mul(h.c[d - s], Q[d - s][r - s]));
        h.c[d - r] = v;
    }
    return KernelResult<F>{std::move(h), atil, btil};
}

// Isogenous-curve coefficients from the kernel polynomial (sums over the
// kernel abscissae, Velu's formulas).
template <class F>
void velu_from_kernel(const Curve<F>& E, const Poly<F>& h,
                      typename F::Elem& atil, typename F::Elem& btil) {
    const F& k = E.k;
    int d = h.deg();
    auto coef = [&](int i) { return i >= 0 ? h.c[i] : k.zero(); };
    auto e1 = k.neg(coef(d - 1));
    auto e2 = d >= 2 ? coef(d - 2) : k.zero();
    auto e3 = d >= 3 ? k.neg(coef(d - 3)) : k.zero();
    auto p1 = e1;
    auto p2 = k.sub(k.mul(e1, p1), k.mul(k.from_int(BigInt(2)), e2));
    auto p3 = k.add(k.sub(k.mul(e1, p2), k.mul(e2, p1)),
                    k.mul(k.from_int(BigInt(3)), e3));
    auto dd = k.from_int(BigInt(d));
    atil = k.sub(E.a, k.add(k.mul(k.from_int(BigInt(30)), p2),
                            k.mul(k.mul(k.from_int(BigInt(10)), E.a), dd)));
    auto inner = k.add(k.mul(k.from_int(BigInt(10)), p3),
                       k.add(k.mul(k.mul(k.from_int(BigInt(6)), E.a), p1),
                             k.mul(k.mul(k.from_int(BigInt(4)), E.b), dd)));
    btil = k.sub(E.b, k.mul(k.from_int(BigInt(7)), inner));
}

// x([n]P) as an element of F_p[x]/(mod), given the reduced b-list.
// Throws std::domain_error if a required inverse does not exist in the
// quotient ring (callers treat that as "candidate failed").
template <class F>
Poly<F> mult_x_map(const F& k, const std::vector<Poly<F>>& b,
                   const Poly<F>& f, const Poly<F>& x0, int n,
                   const Poly<F>& mod) {
    if (n == 1) return x0;
    Poly<F> num = poly_mulmod(k, b[n - 1], b[n + 1], mod);
    Poly<F> den = poly_mulmod(k, b[n], b[n], mod);
    if (n % 2 == 1)
        num = poly_mulmod(k, f, num, mod);
    else
        den = poly_mulmod(k, f, den, mod);
    return poly_sub(k, x0, poly_mulmod(k, num, poly_inv_mod(k, den, mod), mod));
}

// Completes one kernel from an irreducible factor g1 of the torsion gcd:
// adjoin a root x0 of g1, walk x([n]P) for n = 1..d in F_p[x]/(g1), and
// require the elementary symmetric functions to land in the base field.
template <class F>
std::optional<Poly<F>> closure_kernel(const Curve<F>& E, unsigned ell,
                                      const Poly<F>& g1) {
    const F& k = E.k;
    int d = static_cast<int>(ell - 1) / 2;
    auto b = division_b_list(E, d + 2, &g1);
    Poly<F> f;
    f.c = {E.b, E.a, k.zero(), k.one()};
    f = poly_rem(k, f, g1);
    Poly<F> x0 = poly_rem(k, poly_x(k), g1);
    // prod[i] = coefficient of X^i of prod_n (X - x([n]P)), an element of
    // the quotient ring
    std::vector<Poly<F>> prod = {poly_one(k)};
    try {
        for (int n = 1; n <= d; ++n) {
            Poly<F> xn = mult_x_map(k, b, f, x0, n, g1);
            std::vector<Poly<F>> next(prod.size() + 1, poly_zero(k));
            for (std::size_t i = 0; i < prod.size(); ++i) {
                next[i + 1] = poly_add(k, next[i + 1], prod[i]);
                next[i] = poly_sub(k, next[i],
                                   poly_mulmod(k, xn, prod[i], g1));
            }
            prod = std::move(next);
        }
    } catch (const std::domain_error&) {
        return std::nullopt;  // g1 was not a kernel factor
    }
    Poly<F> h;
    h.c.assign(d + 1, k.zero());
    for (int i = 0; i <= d; ++i) {
        if (prod[i].deg() > 0) return std::nullopt;  // not Galois-stable
        h.c[i] = prod[i].is_zero() ? k.zero() : prod[i].c[0];
    }
    poly_trim(k, h);
    if (h.deg() != d) return std::nullopt;
    return h;
}

// Elkies kernel via the full ell-torsion polynomial: locate the eigenvalue
// factor of psi_ell by scanning candidate eigenvalues.  Slow but assumption
// free; used when the derivative route declines.
template <class F>
std::optional<KernelResult<F>> torsion_kernel(const Curve<F>& E, unsigned ell,
                                              Rng& rng,
                                              std::optional<unsigned> hint) {
    const F& k = E.k;
    int d = static_cast<int>(ell - 1) / 2;
    auto full = division_b_list(E, static_cast<int>(ell));
    Poly<F> psi = poly_make_monic(k, full[ell]);
    Poly<F> f;
    f.c = {E.b, E.a, k.zero(), k.one()};
    auto b = division_b_list(E, d + 2, &psi);
    Poly<F> xp = frobenius_power(k, psi);
    Poly<F> xdiff = poly_sub(k, poly_x(k), xp);

    std::vector<int> order;
    if (hint) {
        int hrep = static_cast<int>(*hint % ell);
        if (hrep > d) hrep = static_cast<int>(ell) - hrep;
        if (hrep >= 1) order.push_back(hrep);
    }
    for (int lam = 1; lam <= d; ++lam)
        if (order.empty() || lam != order[0]) order.push_back(lam);

    for (int lam : order) {
        Poly<F> lhs, rhs;
        if (lam % 2 == 1) {
            lhs = poly_mulmod(k, xdiff, poly_mulmod(k, b[lam], b[lam], psi),
                              psi);
            rhs = poly_mulmod(k, f,
                              poly_mulmod(k, b[lam - 1], b[lam + 1], psi), psi);
        } else {
            lhs = poly_mulmod(
                k, xdiff,
                poly_mulmod(k, f, poly_mulmod(k, b[lam], b[lam], psi), psi),
                psi);
            rhs = poly_mulmod(k, b[lam - 1], b[lam + 1], psi);
        }
        Poly<F> G = poly_gcd(k, poly_sub(k, lhs, rhs), psi);
        if (G.deg() <= 0) continue;
        std::optional<Poly<F>> h;
        if (G.deg() == d) {
            h = poly_make_monic(k, G);
        } else {
            Poly<F> g1 = poly_min_irreducible_factor(k, G, rng);
            h = closure_kernel(E, ell, g1);
        }
        if (!h) continue;
        KernelResult<F> out;
        out.h = std::move(*h);
        velu_from_kernel(E, out.h, out.atilde, out.btilde);
        return out;
    }
    return std::nullopt;
}

// Frobenius eigenvalue on the kernel: lambda in [1, ell-1] with
// (x,y)^p = [lambda](x,y) for points with h(x) = 0, or nullopt.
template <class F>
std::optional<unsigned> kernel_eigenvalue(const Curve<F>& E, unsigned ell,
                                          const Poly<F>& h) {
    const F& k = E.k;
    int d = static_cast<int>(ell - 1) / 2;
    Poly<F> f;
    f.c = {E.b, E.a, k.zero(), k.one()};
    Poly<F> fr = poly_rem(k, f, h);
    auto b = division_b_list(E, d + 3, &h);
    auto bat = [&](int i) -> Poly<F> {
        if (i == -1) return poly_const(k, k.neg(k.one()));
        return b[i];
    };
    Poly<F> xp = frobenius_power(k, h);
    Poly<F> yp = poly_powmod(k, fr, (k.modulus() - 1) / 2, h);
    Poly<F> xdiff = poly_sub(k, poly_x(k), xp);
    for (int lam = 1; lam <= d; ++lam) {
        Poly<F> lhs, rhs;
        if (lam % 2 == 1) {
            lhs = poly_mulmod(k, xdiff, poly_mulmod(k, b[lam], b[lam], h), h);
            rhs = poly_mulmod(k, fr,
                              poly_mulmod(k, b[lam - 1], b[lam + 1], h), h);
        } else {
            lhs = poly_mulmod(
                k, xdiff,
                poly_mulmod(k, fr, poly_mulmod(k, b[lam], b[lam], h), h), h);
            rhs = poly_mulmod(k, b[lam - 1], b[lam + 1], h);
        }
        if (!poly_eq(k, poly_sub(k, lhs, rhs), poly_zero(k))) continue;
        // sign of the eigenvalue from the y-coordinate:
        //   odd  lam:   4 yp b^3 = b_{l+2} b_{l-1}^2 - b_{l-2} b_{l+1}^2
        //   even lam: 4 f^2 yp b^3 = same right-hand side
        Poly<F> b3 = poly_mulmod(k, poly_mulmod(k, b[lam], b[lam], h), b[lam],
                                 h);
        Poly<F> yl = poly_scale(k, poly_mulmod(k, yp, b3, h),
                                k.from_int(BigInt(4)));
        if (lam % 2 == 0) {
            Poly<F> f2 = poly_mulmod(k, fr, fr, h);
            yl = poly_mulmod(k, yl, f2, h);
        }
        Poly<F> yr = poly_sub(
            k,
            poly_mulmod(k, bat(lam + 2),
                        poly_mulmod(k, bat(lam - 1), bat(lam - 1), h), h),
            poly_mulmod(k, bat(lam - 2),
                        poly_mulmod(k, bat(lam + 1), bat(lam + 1), h), h));
        bool plus = poly_eq(k, poly_sub(k, yl, yr), poly_zero(k));
        return plus ? static_cast<unsigned>(lam)
                    : ell - static_cast<unsigned>(lam);
    }
    return std::nullopt;
}

inline unsigned pow_mod_u(unsigned a, unsigned e, unsigned m) {
    unsigned long long r = 1, x = a % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<unsigned>(r);
}

// Synthetic division of g by (X - r); g(r) must be zero.
template <class F>
Poly<F> deflate_root(const F& k, const Poly<F>& g,
                     const typename F::Elem& r) {
    int n = g.deg();
    Poly<F> q;
    q.c.assign(n, k.zero());
    typename F::Elem carry = g.c[n];
    for (int i = n - 1; i >= 0; --i) {
        q.c[i] = carry;
        carry = k.add(g.c[i], k.mul(carry, r));
    }
    poly_trim(k, q);
    return q;
}

// One odd level: classify as Atkin/Elkies, and for Elkies levels produce the
// kernel, eigenvalue and trace residue.  Throws std::runtime_error when an
// internally impossible state is reached (the caller re-tests primality).
template <class F>
void process_odd_level(const Curve<F>& E, unsigned ell, const ModPoly& phi,
                       Rng& rng, PrimeOutcome& out) {
    const F& k = E.k;
    const BigInt& p = k.modulus();
    auto j = E.j_invariant();
    Poly<F> phij = eval_phi_at_j(k, phi, j);
    Poly<F> xq = frobenius_power(k, phij);
    Poly<F> f = poly_gcd(k, poly_sub(k, xq, poly_x(k)), phij);
    if (f.deg() <= 0) {
        out.kind = PrimeKind::Atkin;
        return;
    }
    // f splits over F_p; collect every root and take the smallest one not
    // sitting on a singular point of Phi.  Only when all roots are singular
    // is the level skipped.
    std::vector<typename F::Elem> roots;
    for (Poly<F> g = f; g.deg() > 0;) {
        auto r = poly_find_root(k, g, rng);
        if (!r) throw std::runtime_error("level factor has no rational root");
        roots.push_back(*r);
        g = deflate_root(k, g, *r);
    }
    std::sort(roots.begin(), roots.end(),
              [&](const auto& x, const auto& y) {
                  return k.to_int(x) < k.to_int(y);
              });
    const typename F::Elem* jhat = nullptr;
    PhiPartials<F> P{};
    for (const auto& r : roots) {
        PhiPartials<F> cand = phi_partials_at(k, phi, j, r);
        if (k.is_zero(cand.px) && k.is_zero(cand.py)) continue;
        jhat = &r;
        P = cand;
        break;
    }
    if (!jhat) {
        out.jhat = k.to_int(roots.front());
        out.kind = PrimeKind::SkippedDegenerate;
        return;
    }
    out.jhat = k.to_int(*jhat);
    out.kind = PrimeKind::Elkies;

    std::optional<KernelResult<F>> ker =
        analytic_kernel(E, ell, *jhat, phi);
    if (!ker) {
        // eigenvalue is a square root of p when the level factor had a
        // double root; feed it to the scan as a hint
        std::optional<unsigned> hint;
        if (k.is_zero(P.py)) {
            unsigned pm = static_cast<unsigned>(p % ell);
            for (unsigned s = 1; s < ell; ++s)
                if (s * s % ell == pm) {
                    hint = s;
                    break;
                }
        }
        ker = torsion_kernel(E, ell, rng, hint);
    }
    if (!ker) {
        // a rational root of Phi without a rational eigenspace: extra
        // automorphisms (j = 0 or 1728) decouple root rationality from
        // kernel rationality, so the level carries no usable residue
        out.kind = PrimeKind::SkippedDegenerate;
        return;
    }

    auto lam = kernel_eigenvalue(E, ell, ker->h);
    if (!lam) {
        out.kind = PrimeKind::SkippedDegenerate;
        return;
    }
    out.lambda = *lam;
    unsigned pm = static_cast<unsigned>(p % ell);
    unsigned linv = pow_mod_u(*lam, ell - 2, ell);
    out.t_mod = (*lam + pm * 1ULL * linv) % ell;
    out.kernel.reserve(ker->h.c.size());
    for (const auto& c : ker->h.c) out.kernel.push_back(k.to_int(c));
}

// Level 2: t_2 = 0 iff x^3 + ax + b has a rational root.
template <class F>
unsigned level_two_trace(const Curve<F>& E) {
    const F& k = E.k;
    Poly<F> f;
    f.c = {E.b, E.a, k.zero(), k.one()};
    Poly<F> xq = frobenius_power(k, f);
    Poly<F> g = poly_gcd(k, poly_sub(k, xq, poly_x(k)), f);
    return g.deg() > 0 ? 0u : 1u;
}

template <class F>
CountResult sea_count_impl(const F& k, const BigInt& p, const ModPolyDb& db,
                           Rng& rng, const SeaOptions& opts,
                           const typename F::Elem& a,
                           const typename F::Elem& b) {
    CountResult res;
    auto fail = [&res](CountStatus s) -> CountResult& {
        res.status = s;
        res.n = 0;
        return res;
    };

    ++res.mr_rounds;
    if (p % 2 == 0 || !miller_rabin(p, 1, rng))
        return fail(CountStatus::CompositeDetected);

    Curve<F> E(k, a, b);
    BigInt disc = k.to_int(E.disc());
    BigInt g = boost::multiprecision::gcd(disc, p);
    if (g == p) return fail(CountStatus::Singular);
    if (g > 1) return fail(CountStatus::CompositeDetected);

    try {
        if (supersingular_test(E, rng, opts.ss_rounds)) {
            res.supersingular = true;
            res.trace = 0;
            res.n = p + 1;
            res.status = CountStatus::Counted;
            return res;
        }

        BigInt M = 1;
        std::vector<std::pair<BigInt, BigInt>> residues;
        BigInt two_sqrt_p = isqrt(4 * p);
        for (unsigned ell = 2;; ell = next_small_prime(ell)) {
            if (BigInt(ell) == p) continue;
            if (p % ell == 0) return fail(CountStatus::CompositeDetected);

            PrimeOutcome out;
            out.ell = ell;
            if (ell == 2) {
                out.kind = PrimeKind::Elkies;
                out.t_mod = level_two_trace(E);
            } else {
                const ModPoly& phi = db.require(ell);
                process_odd_level(E, ell, phi, rng, out);
            }
            res.outcomes.push_back(out);

            ++res.mr_rounds;
            if (!miller_rabin(p, 1, rng))
                return fail(CountStatus::CompositeDetected);

            if (out.kind == PrimeKind::Elkies) {
                ++res.elkies_levels;
                M *= ell;
                res.modulus = M;
                residues.emplace_back(BigInt(out.t_mod), BigInt(ell));
                if (opts.early_abort && out.t_mod == (p + 1) % ell &&
                    BigInt(ell) < p + 1 - two_sqrt_p)
                    return fail(CountStatus::AbortCompositeOrder);
                if (M * M > 16 * p) break;
            }
        }

        CrtResult crt = crt_signed(residues);
        BigInt t = crt.value;
        if (t * t > 4 * p) {
            if (is_prime(p) == PrimalityVerdict::Composite)
                return fail(CountStatus::CompositeDetected);
            return fail(CountStatus::TraceOutOfRange);
        }
        res.trace = t;
        res.n = p + 1 - t;
        res.status = CountStatus::Counted;
        return res;
    } catch (const KeyMissingError&) {
        res.mr_rounds += 20;
        if (!miller_rabin(p, 20, rng))
            return fail(CountStatus::CompositeDetected);
        return fail(CountStatus::DatabaseExhausted);
    } catch (const NonInvertibleError&) {
        return fail(CountStatus::CompositeDetected);
    } catch (const std::runtime_error&) {
        if (is_prime(p) == PrimalityVerdict::Composite)
            return fail(CountStatus::CompositeDetected);
        throw;
    }
}

}  // namespace detail

// Point count for y^2 = x^3 + ax + b over F_p via the Elkies-level trace
// residues.  Requires p > 3; a and b are reduced mod p on entry.  Never
// returns a wrong count: every failure mode is a distinct status.
inline CountResult sea_count(const BigInt& p, const BigInt& a, const BigInt& b,
                             const ModPolyDb& db, Rng& rng,
                             const SeaOptions& opts = {}) {
    if (p <= 3) throw std::domain_error("sea_count: p must exceed 3");
    if (p < (BigInt(1) << 62)) {
        Fp64 k(to_u64(p));
        return detail::sea_count_impl(k, p, db, rng, opts, k.from_int(a),
                                      k.from_int(b));
    }
    FpBig k(p);
    return detail::sea_count_impl(k, p, db, rng, opts, k.from_int(a),
                                  k.from_int(b));
}

}  // namespace elk
