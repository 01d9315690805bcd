#include <catch2/catch_amalgamated.hpp>

#include <elk/fp.hpp>
#include <elk/poly.hpp>
#include <elk/rng.hpp>

using elk::BigInt;
using elk::Fp64;
using elk::FpBig;

TEST_CASE("Fp64 and FpBig agree operation by operation") {
    Fp64 k(1009);
    FpBig kb(1009);
    elk::Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = rng.uniform_u64(0, 1008);
        std::uint64_t y = rng.uniform_u64(1, 1008);
        auto a = k.from_int(BigInt(x)), b = k.from_int(BigInt(y));
        auto A = kb.from_int(BigInt(x)), B = kb.from_int(BigInt(y));
        CHECK(k.to_int(k.add(a, b)) == kb.to_int(kb.add(A, B)));
        CHECK(k.to_int(k.sub(a, b)) == kb.to_int(kb.sub(A, B)));
        CHECK(k.to_int(k.mul(a, b)) == kb.to_int(kb.mul(A, B)));
        CHECK(k.to_int(k.inv(b)) == kb.to_int(kb.inv(B)));
        CHECK(k.to_int(k.pow(a, 123)) == kb.to_int(kb.pow(A, 123)));
    }
}

TEST_CASE("field axioms on random samples") {
    Fp64 k(65537);
    elk::Rng rng(32);
    for (int i = 0; i < 50; ++i) {
        auto a = k.from_int(BigInt(rng.uniform_u64(1, 65536)));
        CHECK(k.to_int(k.mul(a, k.inv(a))) == 1);
        CHECK(k.to_int(k.pow(a, 65536)) == 1);  // Fermat
        CHECK(k.to_int(k.add(a, k.neg(a))) == 0);
    }
}

TEST_CASE("inversion failure on a composite modulus carries a witness") {
    Fp64 k(561);  // 3 * 11 * 17
    bool threw = false;
    try {
        (void)k.inv(k.from_int(BigInt(33)));
    } catch (const elk::NonInvertibleError& e) {
        threw = true;
        CHECK(e.witness() > 1);
        CHECK(561 % elk::to_u64(e.witness()) == 0);
    }
    CHECK(threw);
}

static elk::Poly<Fp64> rand_poly(const Fp64& k, elk::Rng& rng, int deg) {
    elk::Poly<Fp64> p;
    for (int i = 0; i <= deg; ++i)
        p.c.push_back(k.from_int(BigInt(rng.uniform_u64(0, 100))));
    elk::poly_trim(k, p);
    return p;
}

TEST_CASE("polynomial division invariant a = qb + r") {
    Fp64 k(101);
    elk::Rng rng(33);
    for (int i = 0; i < 30; ++i) {
        auto a = rand_poly(k, rng, 12);
        auto b = rand_poly(k, rng, 5);
        if (b.deg() < 0) continue;
        auto r = elk::poly_rem(k, a, b);
        CHECK(r.deg() < b.deg());
        // (a - r) must be divisible by b
        auto diff = elk::poly_sub(k, a, r);
        auto rr = elk::poly_rem(k, diff, b);
        CHECK(rr.deg() < 0);
    }
}

TEST_CASE("gcd of polynomials with a planted common factor") {
    Fp64 k(101);
    elk::Rng rng(34);
    for (int i = 0; i < 20; ++i) {
        auto f = rand_poly(k, rng, 3);
        if (f.deg() < 1) continue;
        auto g = rand_poly(k, rng, 4);
        auto h = rand_poly(k, rng, 4);
        auto gf = elk::poly_mul(k, g, f);
        auto hf = elk::poly_mul(k, h, f);
        auto d = elk::poly_gcd(k, gf, hf);
        // gcd is monic and divisible by f
        CHECK(d.deg() >= f.deg());
        CHECK(k.to_int(d.c.back()) == 1);
        CHECK(elk::poly_rem(k, d, elk::poly_make_monic(k, f)).deg() < 0);
    }
}

TEST_CASE("root extraction on a planted split polynomial") {
    Fp64 k(101);
    elk::Rng rng(35);
    // (X - 3)(X - 5)
    elk::Poly<Fp64> f;
    f.c = {k.from_int(BigInt(15)), k.from_int(BigInt(101 - 8)), k.one()};
    auto r = elk::poly_find_root(k, f, rng);
    REQUIRE(r.has_value());
    std::uint64_t rv = static_cast<std::uint64_t>(k.to_int(*r));
    CHECK((rv == 3 || rv == 5));
    auto fac = elk::poly_min_irreducible_factor(k, f, rng);
    CHECK(fac.deg() == 1);
}

TEST_CASE("Frobenius power matches a hand-reduced case") {
    // X^7 mod (X^2 - 2) over F_7: X^2 = 2, so X^7 = 8 X = X
    Fp64 k(7);
    elk::Poly<Fp64> m;
    m.c = {k.from_int(BigInt(5)), k.zero(), k.one()};
    auto fr = elk::frobenius_power(k, m);
    REQUIRE(fr.deg() == 1);
    CHECK(k.to_int(fr.c[0]) == 0);
    CHECK(k.to_int(fr.c[1]) == 1);
}

TEST_CASE("big-field polynomial arithmetic round trip") {
    FpBig k(BigInt("4611686018427388039"));
    elk::Rng rng(36);
    elk::Poly<FpBig> a, b;
    for (int i = 0; i < 6; ++i) {
        a.c.push_back(k.from_int(BigInt(rng.uniform_u64(
            0, std::numeric_limits<std::uint64_t>::max()))));
        b.c.push_back(k.from_int(BigInt(rng.uniform_u64(
            0, std::numeric_limits<std::uint64_t>::max()))));
    }
    elk::poly_trim(k, a);
    elk::poly_trim(k, b);
    auto ab = elk::poly_mul(k, a, b);
    auto r = elk::poly_rem(k, ab, b);
    CHECK(r.deg() < 0);
}
