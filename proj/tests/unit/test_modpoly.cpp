#include <cstdlib>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <elk/curve.hpp>
#include <elk/modpoly.hpp>
#include <elk/rng.hpp>

using elk::BigInt;
using elk::Fp64;

static elk::ModPolyDb bundled() {
    return elk::ModPolyDb::from_dir(elk::ModPolyDb::default_dir());
}

TEST_CASE("bundled database shape") {
    auto db = bundled();
    auto levels = db.levels();
    REQUIRE(levels.size() == 18);
    CHECK(levels.front() == 2);
    CHECK(levels.back() == 61);
    for (unsigned L : levels) {
        const elk::ModPoly& phi = db.require(L);
        CHECK(phi.at(L + 1, 0) == 1);
        CHECK(elk::validate_kronecker(phi));
    }
    CHECK(db.require(5).at(0, 0) ==
          BigInt("141359947154721358697753474691071362751004672000"));
    CHECK(db.find(67) == nullptr);
    CHECK_THROWS_AS(db.require(67), elk::KeyMissingError);
    try {
        db.require(67);
    } catch (const elk::KeyMissingError& e) {
        CHECK(e.level() == 67);
    }
}

TEST_CASE("serialization round trip is byte exact") {
    auto db = bundled();
    for (unsigned L : {2u, 11u, 61u}) {
        std::ostringstream os;
        elk::write_level(os, db.require(L));
        std::istringstream is(os.str());
        auto db2 = elk::ModPolyDb::from_stream(is);
        std::ostringstream os2;
        elk::write_level(os2, db2.require(L));
        CHECK(os.str() == os2.str());
    }
}

TEST_CASE("a perturbed coefficient fails the Kronecker congruence") {
    auto db = bundled();
    for (unsigned L : {2u, 13u}) {
        elk::ModPoly phi = db.require(L);
        phi.coeff[{1, 1}] += 1;
        CHECK_FALSE(elk::validate_kronecker(phi));
        CHECK_THROWS_AS(elk::validate_structure(phi), elk::ValidationError);
    }
}

TEST_CASE("parser rejects malformed input") {
    auto parse = [](const std::string& s) {
        std::istringstream is(s);
        return elk::ModPolyDb::from_stream(is);
    };
    CHECK_THROWS_AS(parse("bogus 2\n"), elk::ParseError);
    CHECK_THROWS_AS(parse("ell 2\n0 1 5\n"), elk::ParseError);    // i < j
    CHECK_THROWS_AS(parse("ell 2\n1 0 5\n1 0 6\n"), elk::ParseError);
    CHECK_THROWS_AS(parse("ell 2\n3 0 5 9\n"), elk::ParseError);  // trailing
    CHECK_THROWS_AS(parse("ell 2\n3 0 xyz\n"), elk::ParseError);
    // structurally complete but not monic
    CHECK_THROWS_AS(parse("ell 2\n3 0 2\n2 2 -1\n1 1 -1\n"),
                    elk::ValidationError);
}

TEST_CASE("default directory honors the environment variable") {
    setenv("ELK_MODPOLY_DIR", "/nonexistent/for/test", 1);
    CHECK(elk::ModPolyDb::default_dir() ==
          std::filesystem::path("/nonexistent/for/test"));
    unsetenv("ELK_MODPOLY_DIR");
    CHECK(std::filesystem::is_directory(elk::ModPolyDb::default_dir()));
}

TEST_CASE("phi evaluated at j is monic of degree ell + 1") {
    auto db = bundled();
    Fp64 k(10007);
    elk::Rng rng(51);
    for (unsigned L : {3u, 7u, 19u}) {
        for (int i = 0; i < 5; ++i) {
            auto j = k.from_int(BigInt(rng.uniform_u64(0, 10006)));
            auto f = elk::eval_phi_at_j(k, db.require(L), j);
            CHECK(f.deg() == static_cast<int>(L) + 1);
            CHECK(k.to_int(f.c.back()) == 1);
        }
    }
}

TEST_CASE("bivariate symmetry via univariate evaluations") {
    auto db = bundled();
    Fp64 k(10007);
    elk::Rng rng(52);
    for (int i = 0; i < 20; ++i) {
        auto x = k.from_int(BigInt(rng.uniform_u64(0, 10006)));
        auto y = k.from_int(BigInt(rng.uniform_u64(0, 10006)));
        auto fx = elk::eval_phi_at_j(k, db.require(5), x);
        auto fy = elk::eval_phi_at_j(k, db.require(5), y);
        CHECK(k.to_int(elk::poly_eval(k, fx, y)) ==
              k.to_int(elk::poly_eval(k, fy, x)));
    }
}

TEST_CASE("partial derivatives against a synthetic polynomial") {
    // stored {(3,0):1, (1,1):2, (0,0):5} means X^3 + Y^3 + 2XY + 5 after
    // symmetric completion; at (2,3): 52, 18, 31, 12, 2, 18
    elk::ModPoly phi;
    phi.ell = 2;
    phi.coeff[{3, 0}] = 1;
    phi.coeff[{1, 1}] = 2;
    phi.coeff[{0, 0}] = 5;
    Fp64 k(101);
    auto P = elk::phi_partials_at(k, phi, k.from_int(BigInt(2)),
                                  k.from_int(BigInt(3)));
    CHECK(k.to_int(P.phi) == 52);
    CHECK(k.to_int(P.px) == 18);
    CHECK(k.to_int(P.py) == 31);
    CHECK(k.to_int(P.pxx) == 12);
    CHECK(k.to_int(P.pxy) == 2);
    CHECK(k.to_int(P.pyy) == 18);
}

TEST_CASE("a rational 2-isogeny shows as a root of phi_2") {
    // (5,1,1) has 9 points: 9 odd, no rational 2-torsion, so use a curve
    // with one: y^2 = x(x^2+x+3) over F_7 has (0,0)
    auto db = bundled();
    Fp64 k(7);
    elk::Curve<Fp64> E(k, k.from_int(BigInt(1)), k.zero());  // x^3 + x
    auto j = E.j_invariant();
    auto f = elk::eval_phi_at_j(k, db.require(2), j);
    bool has_root = false;
    for (std::uint64_t x = 0; x < 7; ++x)
        if (k.is_zero(elk::poly_eval(k, f, k.from_int(BigInt(x)))))
            has_root = true;
    CHECK(has_root);
}
