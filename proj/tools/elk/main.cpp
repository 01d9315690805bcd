// Command-line front end: count / gen / census / modpoly / selftest.
// Reports go to stdout, logs and errors to stderr.  Exit codes: 0 success,
// 1 domain error (bad input, unusable file), 2 validation failure.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <elk/census.hpp>
#include <elk/curvegen.hpp>
#include <elk/modpoly.hpp>
#include <elk/sea.hpp>
#include <elk/stats.hpp>

namespace {

using elk::BigInt;
using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct Config {
    std::filesystem::path db_path = elk::ModPolyDb::default_dir();
    std::uint64_t cap = std::uint64_t{1} << 16;  // naive oracle ceiling
    std::uint64_t seed = 1;
    bool json = false;
    unsigned jobs = 1;
};

std::string dec(const BigInt& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

BigInt parse_bigint(const std::string& s, const char* what) {
    try {
        return BigInt(s);
    } catch (const std::exception&) {
        throw std::domain_error(std::string(what) + ": not an integer: " + s);
    }
}

elk::ModPolyDb load_db(const Config& cfg) {
    return elk::ModPolyDb::from_path(cfg.db_path);
}

const char* kind_str(elk::PrimeKind k) {
    switch (k) {
        case elk::PrimeKind::Atkin: return "Atkin";
        case elk::PrimeKind::Elkies: return "Elkies";
        default: return "SkippedDegenerate";
    }
}

Json outcome_json(const elk::PrimeOutcome& o) {
    Json j;
    j["ell"] = o.ell;
    j["kind"] = kind_str(o.kind);
    if (o.kind == elk::PrimeKind::Elkies) {
        j["t_mod"] = o.t_mod;
        if (o.ell != 2) {
            j["jhat"] = dec(o.jhat);
            j["lambda"] = o.lambda;
        }
    } else if (o.kind == elk::PrimeKind::SkippedDegenerate) {
        j["jhat"] = dec(o.jhat);
    }
    return j;
}

int cmd_count(const Config& cfg, const std::string& ps, const std::string& as,
              const std::string& bs, bool early_abort) {
    BigInt p = parse_bigint(ps, "--p");
    BigInt a = parse_bigint(as, "--a");
    BigInt b = parse_bigint(bs, "--b");
    if (p <= 3) throw std::domain_error("--p: must exceed 3");
    elk::ModPolyDb db = load_db(cfg);
    elk::Rng rng(cfg.seed);
    elk::SeaOptions opts;
    opts.early_abort = early_abort;
    elk::CountResult r = elk::sea_count(p, a, b, db, rng, opts);

    if (cfg.json) {
        Json j;
        j["schema"] = kSchemaVersion;
        j["command"] = "count";
        j["p"] = dec(p);
        j["a"] = dec(a);
        j["b"] = dec(b);
        j["seed"] = cfg.seed;
        j["status"] = elk::to_string(r.status);
        j["N"] = dec(r.n);
        j["trace"] = dec(r.trace);
        j["modulus"] = dec(r.modulus);
        j["supersingular"] = r.supersingular;
        j["mr_rounds"] = r.mr_rounds;
        Json outs = Json::array();
        for (const auto& o : r.outcomes) outs.push_back(outcome_json(o));
        j["outcomes"] = std::move(outs);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "status = " << elk::to_string(r.status) << "\n";
        if (r.status == elk::CountStatus::Counted) {
            std::cout << "N = " << r.n << "\n"
                      << "t = " << r.trace << "\n"
                      << "M = " << r.modulus << "\n";
            if (r.supersingular) std::cout << "supersingular = true\n";
        }
        for (const auto& o : r.outcomes) {
            std::cout << "  ell " << o.ell << ": " << kind_str(o.kind);
            if (o.kind == elk::PrimeKind::Elkies) {
                if (o.ell != 2)
                    std::cout << " jhat=" << o.jhat << " lambda=" << o.lambda;
                std::cout << " t=" << o.t_mod;
            } else if (o.kind == elk::PrimeKind::SkippedDegenerate) {
                std::cout << " jhat=" << o.jhat;
            }
            std::cout << "\n";
        }
    }
    switch (r.status) {
        case elk::CountStatus::Counted: return 0;
        case elk::CountStatus::CompositeDetected:
        case elk::CountStatus::Singular: return 1;
        default: return 2;
    }
}

int cmd_gen(const Config& cfg, double x, bool early_abort) {
    if (!(x >= 4))
        throw std::domain_error("--x: must be at least 4");
    elk::ModPolyDb db = load_db(cfg);
    elk::Rng rng(cfg.seed);
    elk::GenOptions opts;
    opts.early_abort = early_abort;
    elk::GenResult r;
    try {
        r = elk::generate(x, db, rng, opts);
    } catch (const elk::GenScaleError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "largest supported x with this database: "
                  << e.largest_supported_x << "\n";
        return 1;
    }

    if (cfg.json) {
        Json j;
        j["schema"] = kSchemaVersion;
        j["command"] = "gen";
        j["x"] = x;
        j["seed"] = cfg.seed;
        j["p"] = dec(r.p);
        j["a"] = dec(r.a);
        j["b"] = dec(r.b);
        j["N"] = dec(r.n);
        j["proposals"] = r.proposals;
        j["composite_p"] = r.composite_p;
        j["composite_n"] = r.composite_n;
        j["early_aborts"] = r.early_aborts;
        j["singular"] = r.singular;
        j["db_exhausted"] = r.db_exhausted;
        j["elkies_levels"] = r.elkies_levels;
        j["mr_rounds"] = r.mr_rounds;
        j["ms_propose"] = r.ms_propose;
        j["ms_count"] = r.ms_count;
        j["ms_primality"] = r.ms_primality;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "p = " << r.p << "\n"
                  << "a = " << r.a << "\n"
                  << "b = " << r.b << "\n"
                  << "N = " << r.n << "\n"
                  << "proposals = " << r.proposals << "\n"
                  << "rejected: composite_p=" << r.composite_p
                  << " composite_n=" << r.composite_n
                  << " early_aborts=" << r.early_aborts
                  << " singular=" << r.singular
                  << " db_exhausted=" << r.db_exhausted << "\n"
                  << "elkies_levels = " << r.elkies_levels << "\n"
                  << "mr_rounds = " << r.mr_rounds << "\n";
        std::ostringstream tm;
        tm << std::fixed << std::setprecision(1) << "time: propose="
           << r.ms_propose << "ms count=" << r.ms_count << "ms primality="
           << r.ms_primality << "ms";
        std::cerr << tm.str() << "\n";
    }
    return 0;
}

Json rational_json(const elk::Rational& r) {
    Json j;
    j["num"] = dec(r.num);
    j["den"] = dec(r.den);
    j["value"] = r.value();
    return j;
}

int cmd_census(const Config& cfg, std::uint64_t q, std::uint64_t L,
               const std::vector<unsigned>& nus, const std::string& out) {
    elk::CensusReport rep = elk::census_run(q, L, cfg.jobs);

    std::ostringstream csv;
    elk::write_census_csv(csv, rep);
    if (out != "-") {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::domain_error("--out: cannot open " + out);
        f << csv.str();
        std::cerr << "wrote " << rep.classes.size() << " rows to " << out
                  << "\n";
    }

    if (cfg.json) {
        Json j;
        j["schema"] = kSchemaVersion;
        j["command"] = "census";
        j["q"] = q;
        j["L"] = L;
        j["classes"] = rep.classes.size();
        j["window"] = rep.window;
        j["excluded"] = rep.excluded;
        j["pi_window"] = rep.pi_window();
        Json moments = Json::array();
        for (unsigned nu : nus) {
            elk::MomentPair m = elk::moment_statistic(rep, nu);
            Json mj;
            mj["nu"] = nu;
            mj["per_class"] = rational_json(m.per_class);
            mj["weighted"] = rational_json(m.weighted);
            moments.push_back(std::move(mj));
        }
        j["moments"] = std::move(moments);
        auto [bad_a, bad_e] = elk::bad_pair_fraction(rep);
        j["bad_pair_atkin"] = rational_json(bad_a);
        j["bad_pair_elkies"] = rational_json(bad_e);
        std::cout << j.dump(2) << "\n";
    } else {
        if (out == "-") std::cout << csv.str();
        std::ostringstream ag;
        ag << "census q=" << q << " L=" << L << ": classes="
           << rep.classes.size() << " window=" << rep.window.size()
           << " excluded=" << rep.excluded.size() << " pi=" << rep.pi_window()
           << "\n";
        ag << std::setprecision(9);
        for (unsigned nu : nus) {
            elk::MomentPair m = elk::moment_statistic(rep, nu);
            ag << "moment nu=" << nu << ": per-class="
               << m.per_class.value() << " weighted=" << m.weighted.value()
               << "\n";
        }
        auto [bad_a, bad_e] = elk::bad_pair_fraction(rep);
        ag << "bad-pair: atkin=" << bad_a.value()
           << " elkies=" << bad_e.value() << "\n";
        std::cerr << ag.str();
    }
    return 0;
}

int cmd_modpoly(const std::string& verb, const std::string& path) {
    elk::ModPolyDb db;
    try {
        db = elk::ModPolyDb::from_path(path);
    } catch (const elk::ParseError& e) {
        std::cerr << "invalid: " << path << ": " << e.what() << "\n";
        return 2;
    } catch (const elk::ValidationError& e) {
        std::cerr << "invalid: " << path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        // unreadable path rather than bad content
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::vector<unsigned> levels = db.levels();
    if (verb == "info") {
        std::cout << "levels = " << levels.size() << "\n";
        for (unsigned L : levels) {
            const elk::ModPoly& phi = db.require(L);
            std::size_t digits = 1;
            for (const auto& [ij, c] : phi.coeff)
                digits = std::max(digits,
                                  dec(c < 0 ? -c : c).size());
            std::cout << "  ell " << L << ": degree " << (L + 1) << ", terms "
                      << phi.term_count() << ", max coefficient " << digits
                      << " digits\n";
        }
    } else {
        // structural checks ran during parsing; report what was verified
        for (unsigned L : levels)
            std::cout << "  ell " << L << ": structure ok, Kronecker ok ("
                      << db.require(L).term_count() << " terms)\n";
        std::cout << "valid: " << levels.size() << " levels\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: embedded oracle suites.  --quick runs only the cheap invariant
// tier; the full run adds count/census/generation cross-checks.

// Exhaustive census at q = 13, L = 3, frozen from an independent
// implementation of the definitions.
constexpr const char* kQ13Census =
    "q,L,j,twist,a,b,t,weight,n_atkin,n_elkies,n_div\n"
    "13,3,0,0,0,1,2,2,1,0,1\n"
    "13,3,0,1,0,2,-5,2,1,0,1\n"
    "13,3,0,2,0,3,5,2,1,0,1\n"
    "13,3,0,3,0,4,-7,2,1,0,1\n"
    "13,3,0,4,0,5,-2,2,1,0,1\n"
    "13,3,0,5,0,6,7,2,1,0,1\n"
    "13,3,1,0,5,12,6,6,1,1,0\n"
    "13,3,1,1,7,5,-6,6,1,1,0\n"
    "13,3,2,0,11,3,1,6,0,1,1\n"
    "13,3,2,1,5,11,-1,6,0,1,1\n"
    "13,3,3,0,1,5,5,6,1,0,1\n"
    "13,3,3,1,4,1,-5,6,1,0,1\n"
    "13,3,4,0,8,1,-2,6,1,0,1\n"
    "13,3,4,1,6,8,2,6,1,0,1\n"
    "13,3,5,0,4,7,0,6,2,0,0\n"
    "13,3,5,1,3,4,0,6,2,0,0\n"
    "13,3,6,0,3,2,2,6,1,0,1\n"
    "13,3,6,1,12,3,-2,6,1,0,1\n"
    "13,3,7,0,12,8,4,6,0,1,1\n"
    "13,3,7,1,9,12,-4,6,0,1,1\n"
    "13,3,8,0,6,4,-3,6,2,0,0\n"
    "13,3,8,1,11,6,3,6,2,0,0\n"
    "13,3,9,0,9,6,1,6,0,1,1\n"
    "13,3,9,1,10,9,-1,6,0,1,1\n"
    "13,3,10,0,2,10,-4,6,0,1,1\n"
    "13,3,10,1,8,2,4,6,0,1,1\n"
    "13,3,11,0,7,9,2,6,1,0,1\n"
    "13,3,11,1,2,7,-2,6,1,0,1\n"
    "13,3,12,0,1,0,-6,3,1,1,0\n"
    "13,3,12,1,2,0,4,3,0,1,1\n"
    "13,3,12,2,4,0,6,3,1,1,0\n"
    "13,3,12,3,7,0,-4,3,0,1,1\n";

class SelfTest {
public:
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            ++fails_;
            std::cerr << "  FAIL: " << what << "\n";
        }
    }
    template <class A, class B>
    void eq(const A& got, const B& want, const std::string& what) {
        std::ostringstream g, w;
        g << got;
        w << want;
        check(g.str() == w.str(),
              what + " (got " + g.str() + ", want " + w.str() + ")");
    }
    bool suite_done(const char* name) {
        bool ok = fails_ == 0;
        std::cout << (ok ? "ok " : "FAIL ") << name << " (" << checks_
                  << " checks)\n";
        total_fails_ += fails_;
        checks_ = fails_ = 0;
        return ok;
    }
    int exit_code() const { return total_fails_ == 0 ? 0 : 2; }

private:
    int checks_ = 0, fails_ = 0, total_fails_ = 0;
};

void suite_integer(SelfTest& t) {
    t.eq(elk::mod_pow(2, 35, 561), 263, "mod_pow(2,35,561)");
    auto c = elk::crt_signed({{2, 3}, {3, 5}, {2, 7}});
    t.eq(c.value, 23, "crt value");
    t.eq(c.modulus, 105, "crt modulus");
    t.eq(elk::isqrt(BigInt("1000000000000000000")), BigInt(1000000000),
         "isqrt(10^18)");
    t.eq(elk::complete_char_sum(1, 3), -1, "complete character sum");
    t.eq(elk::omega_window(77, 5), 1, "omega_window(77,5)");
    t.eq((int)elk::is_prime(561), (int)elk::PrimalityVerdict::Composite,
         "561 composite");
    t.eq((int)elk::is_prime(BigInt("65537")),
         (int)elk::PrimalityVerdict::ProvenPrime, "65537 prime");
}

void suite_field(SelfTest& t, elk::Rng& rng) {
    elk::Fp64 k(1009);
    elk::FpBig kb(1009);
    for (int i = 0; i < 10; ++i) {
        std::uint64_t x = rng.uniform_u64(1, 1008);
        t.eq(k.to_int(k.pow(k.from_int(BigInt(x)), 1008)), 1, "Fermat");
        auto inv = k.inv(k.from_int(BigInt(x)));
        t.eq(k.to_int(k.mul(inv, k.from_int(BigInt(x)))), 1, "inverse");
        std::uint64_t y = rng.uniform_u64(1, 1008);
        t.eq(k.to_int(k.mul(k.from_int(BigInt(x)), k.from_int(BigInt(y)))),
             kb.to_int(kb.mul(kb.from_int(BigInt(x)),
                              kb.from_int(BigInt(y)))),
             "backend agreement");
    }
    // (X+1)(X-1) == X^2 - 1
    elk::Poly<elk::Fp64> xp1, xm1;
    xp1.c = {k.one(), k.one()};
    xm1.c = {k.sub(k.zero(), k.one()), k.one()};
    auto prod = elk::poly_mul(k, xp1, xm1);
    t.eq(k.to_int(prod.c[0]), 1008, "poly product constant");
    t.eq(k.to_int(prod.c[2]), 1, "poly product lead");
}

void suite_curve(SelfTest& t, elk::Rng& rng) {
    t.eq(elk::naive_count_u64(5, 1, 1), 9, "naive count (5,1,1)");
    elk::Fp64 k(5);
    elk::Curve<elk::Fp64> E(k, k.from_int(1), k.from_int(1));
    auto P = elk::ec_random_point(E, rng);
    t.check(elk::ec_mul(E, 9, P).inf, "Lagrange 9P = infinity");
    t.check(elk::on_curve(E, elk::ec_add(E, P, P)), "doubling stays on curve");
}

void suite_modpoly(SelfTest& t, const elk::ModPolyDb& db) {
    auto levels = db.levels();
    t.eq(levels.size(), 18u, "bundled level count");
    t.eq(levels.front(), 2u, "first level");
    t.eq(levels.back(), 61u, "last level");
    for (unsigned L : levels) {
        const elk::ModPoly& phi = db.require(L);
        t.check(elk::validate_kronecker(phi),
                "Kronecker congruence, level " + std::to_string(L));
        t.eq(phi.at(L + 1, 0), 1, "monic, level " + std::to_string(L));
    }
    t.eq(dec(db.require(5).at(0, 0)),
         "141359947154721358697753474691071362751004672000",
         "phi_5 constant term");
}

void suite_sea(SelfTest& t, const elk::ModPolyDb& db, elk::Rng& rng) {
    auto r = elk::sea_count(5, 1, 1, db, rng);
    t.eq((int)r.status, (int)elk::CountStatus::Counted, "(5,1,1) status");
    t.eq(r.n, 9, "(5,1,1) N");
    t.eq(elk::sea_count(5, 4, 3, db, rng).n, 3, "(5,4,3) twist N");
    auto ss = elk::sea_count(5, 0, 1, db, rng);
    t.eq(ss.n, 6, "(5,0,1) supersingular N");
    t.check(ss.supersingular, "(5,0,1) flagged supersingular");
    // random sweep against the exact oracle
    int counted = 0;
    for (int i = 0; i < 40; ++i) {
        std::uint64_t p;
        do {
            p = rng.uniform_u64(5, 4096);
        } while (elk::is_prime(BigInt(p)) == elk::PrimalityVerdict::Composite);
        std::uint64_t a = rng.uniform_u64(0, p - 1);
        std::uint64_t b = rng.uniform_u64(0, p - 1);
        if ((4 * BigInt(a) * a * a + 27 * BigInt(b) * b) % p == 0) continue;
        auto rr = elk::sea_count(BigInt(p), BigInt(a), BigInt(b), db, rng);
        if (rr.status != elk::CountStatus::Counted) continue;
        ++counted;
        if (BigInt(elk::naive_count_u64(p, a, b)) != rr.n)
            t.check(false, "count mismatch at p=" + std::to_string(p));
    }
    t.check(counted >= 25, "enough counted samples in sweep");
}

void suite_census(SelfTest& t) {
    auto rep = elk::census_run(13, 3);
    std::ostringstream os;
    elk::write_census_csv(os, rep);
    t.check(os.str() == kQ13Census, "q=13 census matches frozen table");

    auto rep2 = elk::census_run(101, 20, 3);
    BigInt wsum = 0;
    for (const auto& r : rep2.classes) {
        t.eq(r.n_atkin + r.n_elkies + r.n_div, rep2.pi_window(),
             "window partition");
        wsum += r.weight;
    }
    t.eq(wsum, BigInt(101) * 101 - 101, "weights sum to q^2 - q");
    auto rep1 = elk::census_run(101, 20, 1);
    std::ostringstream a, b;
    elk::write_census_csv(a, rep1);
    elk::write_census_csv(b, rep2);
    t.check(a.str() == b.str(), "jobs=1 and jobs=3 agree");
}

void suite_gen(SelfTest& t, const elk::ModPolyDb& db, elk::Rng& rng) {
    auto r = elk::generate(256, db, rng);
    t.check(r.p >= 256 && r.p <= 512, "p in [x, 2x]");
    t.check(elk::is_prime(r.p) != elk::PrimalityVerdict::Composite,
            "p prime");
    t.check(elk::is_prime(r.n) != elk::PrimalityVerdict::Composite,
            "N prime");
    t.eq(r.proposals, r.composite_p + r.composite_n + r.early_aborts +
                          r.singular + r.db_exhausted + 1,
         "attempt reconciliation");
}

int cmd_selftest(const Config& cfg, bool quick) {
    SelfTest t;
    elk::Rng rng(cfg.seed);
    suite_integer(t);
    t.suite_done("integer-arith");
    suite_field(t, rng);
    t.suite_done("field-poly");
    suite_curve(t, rng);
    t.suite_done("curve-core");
    std::optional<elk::ModPolyDb> db;
    try {
        db = load_db(cfg);
    } catch (const std::exception& e) {
        std::cerr << "  FAIL: " << e.what() << "\n";
    }
    if (db) suite_modpoly(t, *db);
    else t.check(false, "database load");
    t.suite_done("modpoly-db");
    if (!quick && db) {
        suite_sea(t, *db, rng);
        t.suite_done("sea-count");
        suite_census(t);
        t.suite_done("census");
        suite_gen(t, *db, rng);
        t.suite_done("curvegen");
    }
    return t.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elkies-primes-only point counting, prime-order curve "
                 "generation, and Atkin/Elkies census"};
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--db", cfg.db_path,
                   "modular polynomial database (file or directory)")
        ->envname("ELK_MODPOLY_DIR");
    app.add_option("--seed", cfg.seed, "RNG seed; all randomness derives "
                                       "from it");
    app.add_option("--cap", cfg.cap, "naive-count oracle ceiling")
        ->check(CLI::Range(std::uint64_t{1} << 10,
                           std::uint64_t{1} << 26));

    auto* count = app.add_subcommand("count", "count points of y^2 = x^3 + "
                                              "ax + b over F_p");
    count->fallthrough();
    std::string ps, as, bs;
    bool count_abort = false, count_json = false;
    count->add_option("--p", ps, "field characteristic")->required();
    count->add_option("--a", as, "curve coefficient a")->required();
    count->add_option("--b", bs, "curve coefficient b")->required();
    count->add_flag("--early-abort", count_abort,
                    "abandon when a level forces composite order");
    count->add_flag("--json", count_json, "JSON report");

    auto* gen = app.add_subcommand("gen", "random curve of prime order with "
                                          "p in [x, 2x]");
    gen->fallthrough();
    double gx = 0;
    bool gen_abort = false, gen_json = false;
    gen->add_option("--x", gx, "scale parameter")->required();
    gen->add_flag("--early-abort", gen_abort, "enable the early abort");
    gen->add_flag("--json", gen_json, "JSON report");

    auto* census = app.add_subcommand("census", "exact Atkin/Elkies census "
                                                "over all classes mod q");
    census->fallthrough();
    std::uint64_t cq = 0, cL = 0;
    std::vector<unsigned> nus{1};
    std::string out = "-";
    bool census_json = false;
    census->add_option("--q", cq, "prime field size")->required();
    census->add_option("--L", cL, "window parameter: primes in [L, 2L]")
        ->required();
    census->add_option("--nu", nus, "moment orders")->delimiter(',');
    census->add_option("--out", out, "CSV destination, - for stdout");
    census->add_option("--jobs", cfg.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    census->add_flag("--json", census_json, "JSON aggregate report");

    auto* modpoly = app.add_subcommand("modpoly", "database maintenance");
    modpoly->fallthrough();
    modpoly->require_subcommand(1);
    std::string vpath, ipath;
    auto* validate = modpoly->add_subcommand("validate", "structural and "
                                                         "Kronecker checks");
    validate->add_option("path", vpath, "file or directory")->required();
    auto* info = modpoly->add_subcommand("info", "level statistics");
    info->add_option("path", ipath, "file or directory")->required();

    auto* selftest = app.add_subcommand("selftest", "run the embedded oracle "
                                                    "suites");
    selftest->fallthrough();
    bool quick = false;
    selftest->add_flag("--quick", quick, "cheap invariant tier only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (count->parsed()) {
            cfg.json = count_json;
            return cmd_count(cfg, ps, as, bs, count_abort);
        }
        if (gen->parsed()) {
            cfg.json = gen_json;
            return cmd_gen(cfg, gx, gen_abort);
        }
        if (census->parsed()) {
            cfg.json = census_json;
            return cmd_census(cfg, cq, cL, nus, out);
        }
        if (modpoly->parsed())
            return cmd_modpoly(validate->parsed() ? "validate" : "info",
                               validate->parsed() ? vpath : ipath);
        if (selftest->parsed()) return cmd_selftest(cfg, quick);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const elk::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const elk::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        // bad paths and similar environment problems
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
