#include <catch2/catch_amalgamated.hpp>

#include <elk/curvegen.hpp>
#include <elk/stats.hpp>

using elk::BigInt;

static elk::ModPolyDb& db() {
    static elk::ModPolyDb d =
        elk::ModPolyDb::from_dir(elk::ModPolyDb::default_dir());
    return d;
}

TEST_CASE("proposal sampler respects the domain") {
    elk::Rng rng(81);
    for (int i = 0; i < 500; ++i) {
        auto [p, a, b] = elk::propose_triple(100.0, rng);
        CHECK(p >= 100);
        CHECK(p <= 200);
        CHECK(a >= 0);
        CHECK(a < p);
        CHECK(b >= 0);
        CHECK(b < p);
    }
}

TEST_CASE("proposal marginal over p matches the triple-uniform law") {
    elk::Rng rng(82);
    // x = 10: p ranges over the 11 integers [10, 20].  Uniformity over
    // triples (p, a, b) with a, b < p puts mass proportional to p^2 on p.
    std::vector<std::uint64_t> hits(11, 0);
    const int n = 22000;
    for (int i = 0; i < n; ++i) {
        auto [p, a, b] = elk::propose_triple(10.0, rng);
        ++hits[elk::to_u64(p) - 10];
    }
    std::vector<double> expected(11);
    double norm = 0;
    for (int i = 0; i < 11; ++i) {
        expected[i] = double((10 + i) * (10 + i));
        norm += expected[i];
    }
    for (auto& e : expected) e *= n / norm;
    double stat = elk::pearson_statistic(hits, expected);
    double pv = elk::chi_square_sf(stat, 10);
    CHECK(pv > 1e-6);
    // and flat-over-p is firmly rejected, so the weighting is real
    CHECK(elk::chi_square_uniform_pvalue(hits) < 1e-6);
}

TEST_CASE("generation at x = 256") {
    elk::Rng rng(83);
    auto r = elk::generate(256, db(), rng);
    CHECK(r.p >= 256);
    CHECK(r.p <= 512);
    CHECK(elk::is_prime(r.p) == elk::PrimalityVerdict::ProvenPrime);
    CHECK(elk::is_prime(r.n) == elk::PrimalityVerdict::ProvenPrime);
    CHECK(r.a < r.p);
    CHECK(r.b < r.p);
    // every proposal is accounted for exactly once
    CHECK(r.proposals == r.composite_p + r.composite_n + r.early_aborts +
                             r.singular + r.db_exhausted + 1);
    CHECK(r.mr_rounds == 6);  // ceil(ln 256)
    // the accepted count is a real curve order: Lagrange spot check
    elk::Fp64 k(elk::to_u64(r.p));
    elk::Curve<elk::Fp64> E(k, k.from_int(r.a), k.from_int(r.b));
    elk::Rng prng(84);
    for (int i = 0; i < 5; ++i)
        CHECK(elk::ec_mul(E, r.n, elk::ec_random_point(E, prng)).inf);
}

TEST_CASE("same seed reproduces the same curve") {
    elk::Rng r1(85), r2(85);
    auto a = elk::generate(1000, db(), r1);
    auto b = elk::generate(1000, db(), r2);
    CHECK(a.p == b.p);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.n == b.n);
    CHECK(a.proposals == b.proposals);
}

TEST_CASE("early abort only changes the amount of work") {
    elk::GenOptions ea;
    ea.early_abort = true;
    elk::Rng r1(86), r2(86);
    auto plain = elk::generate(4096, db(), r1);
    auto fast = elk::generate(4096, db(), r2, ea);
    // same RNG consumption pattern is not guaranteed, but both must land in
    // the sample space
    for (const auto& r : {plain, fast}) {
        CHECK(elk::is_prime(r.p) == elk::PrimalityVerdict::ProvenPrime);
        CHECK(elk::is_prime(r.n) == elk::PrimalityVerdict::ProvenPrime);
    }
    CHECK(plain.early_aborts == 0);
}

TEST_CASE("scale refusal names the supported bound") {
    elk::Rng rng(87);
    bool threw = false;
    try {
        (void)elk::generate(1e60, db(), rng);
    } catch (const elk::GenScaleError& e) {
        threw = true;
        BigInt m = 1;
        for (unsigned L : db().levels()) m *= L;
        // bound is the largest x with (2 prod)^2 > 16 * 2x still failing
        CHECK(e.largest_supported_x == (m * m - 1) / 32);
        CHECK(e.largest_supported_x > BigInt("1000000000000000000"));
    }
    CHECK(threw);
}

TEST_CASE("timing counters are populated") {
    elk::Rng rng(88);
    auto r = elk::generate(512, db(), rng);
    CHECK(r.ms_count >= 0);
    CHECK(r.ms_propose >= 0);
    CHECK(r.ms_primality >= 0);
    CHECK(r.elkies_levels > 0);
}
