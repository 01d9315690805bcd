#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bigint.hpp"
#include "curve.hpp"

namespace elk {

enum class TraceClass { Atkin, Elkies };

// Classification straight from the trace: ell is Elkies when t^2 - 4q is a
// square mod ell, and 0 counts as a square, so the divisor case lands on the
// Elkies side.  Census reports keep the divisor tally separate (n_div) so
// the strict convention is recoverable.
inline TraceClass classify_from_trace(const BigInt& t, const BigInt& q,
                                      std::uint64_t ell) {
    if (ell < 3 || ell % 2 == 0)
        throw std::domain_error("classify_from_trace: ell must be an odd prime");
    if (q % ell == 0)
        throw std::domain_error("classify_from_trace: ell divides q");
    return jacobi(t * t - 4 * q, BigInt(ell)) >= 0 ? TraceClass::Elkies
                                                   : TraceClass::Atkin;
}

// One isomorphism class of curves over F_q.  n_elkies is the strict residue
// count (Jacobi symbol +1); window primes dividing t^2 - 4q are in n_div.
struct ClassRecord {
    std::uint64_t j = 0;
    unsigned twist = 0;
    std::uint64_t a = 0, b = 0;
    std::int64_t t = 0;
    std::uint64_t weight = 0;
    unsigned n_atkin = 0;
    unsigned n_elkies = 0;
    unsigned n_div = 0;
};

struct CensusReport {
    std::uint64_t q = 0;
    std::uint64_t L = 0;
    std::vector<std::uint64_t> window;    // usable: odd primes in [L,2L] not dividing q
    std::vector<std::uint64_t> excluded;  // window primes dropped by the definition
    std::vector<ClassRecord> classes;     // canonical order: j ascending, then twist

    // pi(2L) - pi(L) before exclusions; the deterministic center is half this.
    std::uint64_t pi_window() const {
        return window.size() + excluded.size();
    }
};

namespace detail {

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e,
                                std::uint64_t q) {
    std::uint64_t r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) r = r * a % q;
        a = a * a % q;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t smallest_nonresidue(std::uint64_t q) {
    for (std::uint64_t c = 2; c < q; ++c)
        if (jacobi_u64(c, q) == -1) return c;
    throw std::domain_error("smallest_nonresidue: none found");
}

// Representatives of F_q^* modulo e-th powers: the smallest member of each
// coset, listed ascending.  gcd(e, q-1) cosets.
inline std::vector<std::uint64_t> power_coset_reps(std::uint64_t q, unsigned e) {
    std::vector<char> is_power(q, 0);
    for (std::uint64_t x = 1; x < q; ++x) is_power[powmod_u64(x, e, q)] = 1;
    std::vector<std::uint64_t> powers;
    for (std::uint64_t x = 1; x < q; ++x)
        if (is_power[x]) powers.push_back(x);
    std::vector<char> seen(q, 0);
    std::vector<std::uint64_t> reps;
    for (std::uint64_t b = 1; b < q; ++b) {
        if (seen[b]) continue;
        reps.push_back(b);
        for (std::uint64_t s : powers) seen[b * s % q] = 1;
    }
    return reps;
}

}  // namespace detail

// All isomorphism classes of nonsingular curves over F_q in canonical order,
// with representatives and pair weights filled in (traces still zero).  For
// j outside {0, 1728} the representative is (3k, 2k) with k = j/(1728-j) and
// its quadratic twist by the smallest non-residue; j = 0 and j = 1728 get one
// class per coset of sixth resp. fourth powers.  Weights sum to q^2 - q.
inline std::vector<ClassRecord> enumerate_classes(std::uint64_t q) {
    if (q <= 3 || q > kNaiveCountCap)
        throw std::domain_error("enumerate_classes: q out of supported range");
    if (is_prime(BigInt(q)) == PrimalityVerdict::Composite)
        throw std::domain_error("enumerate_classes: q must be prime");
    const std::uint64_t c = detail::smallest_nonresidue(q);
    const std::uint64_t c2 = c * c % q;
    const std::uint64_t c3 = c2 * c % q;
    const std::uint64_t j1728 = 1728 % q;
    std::vector<ClassRecord> out;
    out.reserve(2 * q + 8);
    for (std::uint64_t j = 0; j < q; ++j) {
        ClassRecord r;
        r.j = j;
        if (j == 0) {
            auto reps = detail::power_coset_reps(q, 6);
            r.a = 0;
            r.weight = (q - 1) / reps.size();
            for (std::size_t i = 0; i < reps.size(); ++i) {
                r.twist = static_cast<unsigned>(i);
                r.b = reps[i];
                out.push_back(r);
            }
        } else if (j == j1728) {
            auto reps = detail::power_coset_reps(q, 4);
            r.b = 0;
            r.weight = (q - 1) / reps.size();
            for (std::size_t i = 0; i < reps.size(); ++i) {
                r.twist = static_cast<unsigned>(i);
                r.a = reps[i];
                out.push_back(r);
            }
        } else {
            const std::uint64_t denom = (j1728 + q - j) % q;
            const std::uint64_t k =
                j % q * detail::powmod_u64(denom, q - 2, q) % q;
            r.weight = (q - 1) / 2;
            r.twist = 0;
            r.a = 3 * k % q;
            r.b = 2 * k % q;
            out.push_back(r);
            r.twist = 1;
            r.a = r.a * c2 % q;
            r.b = r.b * c3 % q;
            out.push_back(r);
        }
    }
    return out;
}

// Full census: exact traces for every class by character sums against a
// shared squares bitmap, then window classification per class.  Workers split
// the class list into contiguous slices and write disjoint records, so the
// output is identical for any job count.
inline CensusReport census_run(std::uint64_t q, std::uint64_t L,
                               unsigned jobs = 1) {
    if (L < 3) throw std::domain_error("census_run: L must be at least 3");
    if (jobs < 1) throw std::domain_error("census_run: jobs must be positive");
    CensusReport rep;
    rep.q = q;
    rep.L = L;
    for (std::uint64_t ell : primes_in_window(L)) {
        if (ell % 2 == 0 || q % ell == 0)
            rep.excluded.push_back(ell);
        else
            rep.window.push_back(ell);
    }
    rep.classes = enumerate_classes(q);

    std::vector<char> sq(q, 0);
    for (std::uint64_t x = 0; x < q; ++x) sq[x * x % q] = 1;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ClassRecord& r = rep.classes[i];
            std::int64_t chi_sum = 0;
            for (std::uint64_t x = 0; x < q; ++x) {
                std::uint64_t v = (x * x % q * x + r.a * x + r.b) % q;
                if (v == 0) continue;
                chi_sum += sq[v] ? 1 : -1;
            }
            r.t = -chi_sum;  // t = q + 1 - N, N = q + 1 + sum chi
            const std::int64_t d =
                r.t * r.t - 4 * static_cast<std::int64_t>(q);
            for (std::uint64_t ell : rep.window) {
                std::uint64_t dm = static_cast<std::uint64_t>(
                    ((d % static_cast<std::int64_t>(ell)) +
                     static_cast<std::int64_t>(ell)) %
                    static_cast<std::int64_t>(ell));
                if (dm == 0)
                    ++r.n_div;
                else if (detail::jacobi_u64(dm, ell) == 1)
                    ++r.n_elkies;
                else
                    ++r.n_atkin;
            }
        }
    };

    const std::size_t n = rep.classes.size();
    if (jobs == 1 || n < 2 * jobs) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + jobs - 1) / jobs;
        for (unsigned t = 1; t < jobs; ++t) {
            std::size_t begin = t * chunk;
            if (begin >= n) break;
            std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
        work(0, std::min(n, chunk));
        for (auto& th : pool) th.join();
    }
    return rep;
}

// Exact rational with a double view for report output.
struct Rational {
    BigInt num = 0;
    BigInt den = 1;
    double value() const {
        return num.convert_to<double>() / den.convert_to<double>();
    }
};

struct MomentPair {
    Rational per_class;  // average over classes
    Rational weighted;   // average over (a, b) pairs
};

// 2nu-th absolute central moment of the strict Elkies count around the
// deterministic center (pi(2L) - pi(L))/2, both per class and pair-weighted.
// Exact: |n_e - w/2|^(2nu) = (2 n_e - w)^(2nu) / 4^nu.
inline MomentPair moment_statistic(const CensusReport& rep, unsigned nu) {
    if (nu < 1) throw std::domain_error("moment_statistic: nu must be >= 1");
    if (rep.classes.empty())
        throw std::domain_error("moment_statistic: empty report");
    const std::int64_t w = static_cast<std::int64_t>(rep.pi_window());
    BigInt sum = 0, wsum = 0, wtot = 0;
    for (const ClassRecord& r : rep.classes) {
        BigInt dev = 2 * static_cast<std::int64_t>(r.n_elkies) - w;
        BigInt p = 1;
        for (unsigned i = 0; i < 2 * nu; ++i) p *= dev;
        sum += p;
        wsum += p * r.weight;
        wtot += r.weight;
    }
    BigInt scale = 1;
    for (unsigned i = 0; i < nu; ++i) scale *= 4;
    MomentPair out;
    out.per_class = {sum, scale * BigInt(rep.classes.size())};
    out.weighted = {wsum, scale * wtot};
    return out;
}

// Pair-weighted fraction of (a, b) whose class count falls below a third of
// the window size; first element for the Atkin count, second for the strict
// Elkies count.
inline std::pair<Rational, Rational> bad_pair_fraction(
    const CensusReport& rep) {
    if (rep.classes.empty())
        throw std::domain_error("bad_pair_fraction: empty report");
    const std::uint64_t w = rep.pi_window();
    BigInt bad_a = 0, bad_e = 0, wtot = 0;
    for (const ClassRecord& r : rep.classes) {
        if (3 * std::uint64_t{r.n_atkin} < w) bad_a += r.weight;
        if (3 * std::uint64_t{r.n_elkies} < w) bad_e += r.weight;
        wtot += r.weight;
    }
    return {Rational{bad_a, wtot}, Rational{bad_e, wtot}};
}

// f_q(t): number of isomorphism classes with trace exactly t.
inline std::map<std::int64_t, std::uint64_t> fq_histogram(
    const CensusReport& rep) {
    std::map<std::int64_t, std::uint64_t> hist;
    for (const ClassRecord& r : rep.classes) ++hist[r.t];
    return hist;
}

// Fixed column order; one row per class in canonical order.
inline void write_census_csv(std::ostream& out, const CensusReport& rep) {
    out << "q,L,j,twist,a,b,t,weight,n_atkin,n_elkies,n_div\n";
    for (const ClassRecord& r : rep.classes)
        out << rep.q << ',' << rep.L << ',' << r.j << ',' << r.twist << ','
            << r.a << ',' << r.b << ',' << r.t << ',' << r.weight << ','
            << r.n_atkin << ',' << r.n_elkies << ',' << r.n_div << '\n';
}

}  // namespace elk
