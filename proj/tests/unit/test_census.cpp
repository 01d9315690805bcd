#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <elk/census.hpp>

using elk::BigInt;

TEST_CASE("trace classification basics") {
    using TC = elk::TraceClass;
    // t = -3, q = 5: t^2 - 4q = -11; square mod 3, non-residue mod 7
    CHECK(elk::classify_from_trace(-3, 5, 3) == TC::Elkies);
    CHECK(elk::classify_from_trace(-3, 5, 7) == TC::Atkin);
    // divisor case counts as Elkies
    CHECK(elk::classify_from_trace(1, 3, 11) == TC::Elkies);
    CHECK_THROWS_AS(elk::classify_from_trace(1, 5, 2), std::domain_error);
    CHECK_THROWS_AS(elk::classify_from_trace(1, 5, 5), std::domain_error);
}

TEST_CASE("frozen census at q = 13, L = 3") {
    auto rep = elk::census_run(13, 3);
    CHECK(rep.q == 13);
    CHECK(rep.classes.size() == 32);
    CHECK(rep.pi_window() == 2);  // primes 3 and 5 in [3,6]
    // strict Elkies and divisor totals, frozen from an independent pass
    unsigned ne = 0, nd = 0;
    BigInt w = 0;
    for (const auto& r : rep.classes) {
        ne += r.n_elkies;
        nd += r.n_div;
        w += r.weight;
    }
    CHECK(ne == 14);
    CHECK(nd == 24);
    CHECK(w == 13 * 13 - 13);
}

TEST_CASE("frozen aggregates at q = 1009, L = 50") {
    auto rep = elk::census_run(1009, 50, 2);
    CHECK(rep.classes.size() == 2024);
    CHECK(rep.pi_window() == 10);
    std::uint64_t ne = 0, na = 0, nd = 0;
    BigInt w = 0, wne = 0;
    std::int64_t tmax = 0;
    for (const auto& r : rep.classes) {
        ne += r.n_elkies;
        na += r.n_atkin;
        nd += r.n_div;
        w += r.weight;
        wne += BigInt(r.weight) * r.n_elkies;
        tmax = std::max(tmax, r.t < 0 ? -r.t : r.t);
    }
    CHECK(ne == 9878);
    CHECK(na == 10264);
    CHECK(nd == 98);
    CHECK(w == BigInt(1009) * 1009 - 1009);
    CHECK(w == 1017072);
    CHECK(wne == 4963392);
    CHECK(tmax == 63);
    auto m1 = elk::moment_statistic(rep, 1);
    CHECK(std::abs(m1.per_class.value() - 2.265810277) < 1e-8);
    CHECK(std::abs(m1.weighted.value() - 2.272547076) < 1e-8);
    auto m2 = elk::moment_statistic(rep, 2);
    CHECK(std::abs(m2.per_class.value() - 13.933794466) < 1e-8);
    auto [bad_a, bad_e] = elk::bad_pair_fraction(rep);
    CHECK(std::abs(bad_a.value() - 0.149653) < 1e-5);
    CHECK(std::abs(bad_e.value() - 0.174430) < 1e-5);
}

TEST_CASE("per-class partition of the window") {
    auto rep = elk::census_run(101, 20);
    for (const auto& r : rep.classes)
        CHECK(r.n_atkin + r.n_elkies + r.n_div == rep.pi_window());
}

TEST_CASE("trace histogram is symmetric and Hasse-bounded") {
    auto rep = elk::census_run(1009, 50);
    auto hist = elk::fq_histogram(rep);
    for (const auto& [t, c] : hist) {
        CHECK(t * t <= 4 * 1009);
        if (t != 0) {
            auto it = hist.find(-t);
            REQUIRE(it != hist.end());
            CHECK(it->second == c);  // quadratic twist pairs up classes
        }
    }
}

TEST_CASE("worker count does not change the report") {
    auto one = elk::census_run(101, 20, 1);
    auto four = elk::census_run(101, 20, 4);
    std::ostringstream a, b;
    elk::write_census_csv(a, one);
    elk::write_census_csv(b, four);
    CHECK(a.str() == b.str());
}

TEST_CASE("classifier against the census labels on sampled classes") {
    auto rep = elk::census_run(1009, 50);
    auto window = rep.window;
    std::size_t step = rep.classes.size() / 50;
    for (std::size_t i = 0; i < rep.classes.size(); i += step) {
        const auto& r = rep.classes[i];
        if (r.j == 0 || r.j == 1728 % 1009) continue;
        unsigned ne_inclusive = 0;
        for (std::uint64_t ell : window)
            if (elk::classify_from_trace(r.t, 1009, ell) ==
                elk::TraceClass::Elkies)
                ++ne_inclusive;
        // classify_from_trace folds divisors into Elkies; the census keeps
        // them in a separate column
        CHECK(ne_inclusive == r.n_elkies + r.n_div);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(elk::census_run(12, 10), std::domain_error);   // composite
    CHECK_THROWS_AS(elk::census_run(13, 2), std::domain_error);    // L < 3
    CHECK_THROWS_AS(elk::census_run(13, 10, 0), std::domain_error);
}

TEST_CASE("moment statistics are exact rationals") {
    auto rep = elk::census_run(13, 3);
    auto m = elk::moment_statistic(rep, 1);
    // direct recomputation in doubles
    double acc = 0;
    for (const auto& r : rep.classes) {
        double dev = 2.0 * r.n_elkies - 2.0;
        acc += dev * dev / 4.0;
    }
    acc /= rep.classes.size();
    CHECK(std::abs(m.per_class.value() - acc) < 1e-12);
    CHECK_THROWS_AS(elk::moment_statistic(rep, 0), std::domain_error);
}

TEST_CASE("bad-pair fraction shrinks as the window grows") {
    // more primes in the window concentrate the counts away from w/3
    auto small = elk::census_run(10007, 20);
    auto large = elk::census_run(10007, 100);
    auto fs = elk::bad_pair_fraction(small);
    auto fl = elk::bad_pair_fraction(large);
    CHECK(fl.second.value() <= fs.second.value() + 0.05);
    CHECK(fl.first.value() <= fs.first.value() + 0.05);
}
