#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "bigint.hpp"
#include "modpoly.hpp"
#include "rng.hpp"
#include "sea.hpp"

namespace elk {

// Raised when even the full bundled level set cannot certify an order at the
// requested scale, i.e. (prod ell)^2 <= 16 * floor(2x).  Carries the largest
// x the database can serve.
class GenScaleError : public std::domain_error {
public:
    GenScaleError(const std::string& msg, BigInt largest)
        : std::domain_error(msg), largest_supported_x(std::move(largest)) {}
    BigInt largest_supported_x;
};

struct GenOptions {
    bool early_abort = false;
};

struct GenResult {
    BigInt p, a, b, n;
    std::uint64_t proposals = 0;      // triples that reached the counting stage
    std::uint64_t composite_p = 0;    // case 1: p composite
    std::uint64_t composite_n = 0;    // case 2: p prime, group order composite
    std::uint64_t early_aborts = 0;   // abandoned by the partial-residue abort
    std::uint64_t singular = 0;       // p | 4a^3 + 27b^2
    std::uint64_t db_exhausted = 0;   // bundled levels ran out on one proposal
    std::uint64_t elkies_levels = 0;  // Elkies levels processed, all proposals
    unsigned mr_rounds = 0;           // ceil(ln x), applied to both p and N
    double ms_propose = 0;
    double ms_count = 0;
    double ms_primality = 0;
};

namespace detail {

inline BigInt double_to_bigint(double v) { return BigInt(std::floor(v)); }

}  // namespace detail

// One proposal: p uniform on [ceil(x), floor(2x)], a and b uniform on
// [0, floor(2x)], with a wholesale restart until a < p and b < p.  Sampling
// a, b from [0, p-1] directly would give triples with small p more mass
// (~1/p^2 each); the rejection makes every admissible triple exactly equally
// likely at a bounded (< 4x) expected overhead.
inline std::tuple<BigInt, BigInt, BigInt> propose_triple(double x, Rng& rng) {
    if (!(x > 3)) throw std::domain_error("propose_triple: x must exceed 3");
    const BigInt lo = detail::double_to_bigint(std::ceil(x));
    const BigInt hi = detail::double_to_bigint(std::floor(2 * x));
    for (;;) {
        BigInt p = rng.uniform_bigint(lo, hi);
        BigInt a = rng.uniform_bigint(0, hi);
        BigInt b = rng.uniform_bigint(0, hi);
        if (a < p && b < p) return {p, a, b};
    }
}

// Generation loop: propose, count (optionally with early abort), then
// ceil(ln x) Miller-Rabin rounds on p and N followed by the stronger
// primality confirmation on both.  Acceptance depends only on the proposed
// triple, so accepted outputs are uniform over the target set {(p, a, b) :
// p and the group order both prime}.  Failed proposals restart and are
// attributed to exactly one counter, so
//   proposals = composite_p + composite_n + early_aborts + singular +
//               db_exhausted + 1.
inline GenResult generate(double x, const ModPolyDb& db, Rng& rng,
                          const GenOptions& opts = {}) {
    if (!(x > 3)) throw std::domain_error("generate: x must exceed 3");
    const BigInt hi = detail::double_to_bigint(std::floor(2 * x));
    BigInt m_all = 1;
    for (unsigned ell : db.levels()) m_all *= ell;
    if (m_all * m_all <= 16 * hi) {
        BigInt largest = (m_all * m_all - 1) / 32;
        throw GenScaleError(
            "generate: the bundled levels cannot certify orders for x = " +
                detail::double_to_bigint(x).str() +
                "; largest supported x is " + largest.str(),
            largest);
    }

    GenResult res;
    res.mr_rounds = static_cast<unsigned>(std::ceil(std::log(x)));
    SeaOptions sopts;
    sopts.early_abort = opts.early_abort;

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0)
            .count();
    };

    for (;;) {
        auto t0 = clock::now();
        auto [p, a, b] = propose_triple(x, rng);
        res.ms_propose += ms_since(t0);
        ++res.proposals;

        t0 = clock::now();
        CountResult cr = sea_count(p, a, b, db, rng, sopts);
        res.ms_count += ms_since(t0);
        res.elkies_levels += cr.elkies_levels;

        if (cr.status == CountStatus::CompositeDetected) {
            ++res.composite_p;
            continue;
        }
        if (cr.status == CountStatus::Singular) {
            ++res.singular;
            continue;
        }
        if (cr.status == CountStatus::AbortCompositeOrder) {
            ++res.early_aborts;
            continue;
        }
        if (cr.status == CountStatus::DatabaseExhausted) {
            ++res.db_exhausted;
            continue;
        }
        if (cr.status != CountStatus::Counted)
            throw std::runtime_error("generate: count returned " +
                                     std::string(to_string(cr.status)) +
                                     " for p = " + p.str());

        t0 = clock::now();
        bool p_mr = miller_rabin(p, res.mr_rounds, rng);
        bool n_mr = p_mr && miller_rabin(cr.n, res.mr_rounds, rng);
        bool p_ok = p_mr && is_prime(p) != PrimalityVerdict::Composite;
        bool n_ok =
            n_mr && p_ok && is_prime(cr.n) != PrimalityVerdict::Composite;
        res.ms_primality += ms_since(t0);

        if (!p_ok) {
            ++res.composite_p;
            continue;
        }
        if (!n_ok) {
            ++res.composite_n;
            continue;
        }
        res.p = p;
        res.a = a;
        res.b = b;
        res.n = cr.n;
        return res;
    }
}

}  // namespace elk
