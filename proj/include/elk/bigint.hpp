#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace elk {

using BigInt = boost::multiprecision::cpp_int;

class Rng;  // rng.hpp

inline unsigned msb_index(const BigInt& x) {
    if (x <= 0) throw std::domain_error("msb_index: x must be positive");
    return boost::multiprecision::msb(x);
}

inline bool fits_u64(const BigInt& x) {
    return x >= 0 && x <= BigInt(~std::uint64_t{0});
}

inline std::uint64_t to_u64(const BigInt& x) {
    if (!fits_u64(x)) throw std::overflow_error("to_u64: out of range");
    return x.convert_to<std::uint64_t>();
}

// floor of the nonnegative square root
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw std::domain_error("isqrt: negative input");
    return boost::multiprecision::sqrt(n);
}

// b^e mod m with e >= 0, m >= 1; negative b is reduced first
inline BigInt mod_pow(const BigInt& b, const BigInt& e, const BigInt& m) {
    if (e < 0) throw std::domain_error("mod_pow: negative exponent");
    if (m < 1) throw std::domain_error("mod_pow: modulus must be >= 1");
    if (m == 1) return 0;
    BigInt base = b % m;
    if (base < 0) base += m;
    return boost::multiprecision::powm(base, e, m);
}

// g = gcd(a, b) and x, y with a*x + b*y = g (g >= 0)
inline BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
    BigInt r0 = a, r1 = b;
    BigInt x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt t = r0 - q * r1; r0 = r1; r1 = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
    x = x0; y = y0;
    return r0;
}

// inverse of a mod m, or nullopt when gcd(a, m) != 1
inline std::optional<BigInt> mod_inverse(const BigInt& a, const BigInt& m) {
    if (m < 2) throw std::domain_error("mod_inverse: modulus must be >= 2");
    BigInt x, y;
    BigInt g = ext_gcd(a, m, x, y);
    if (g != 1) return std::nullopt;
    x %= m;
    if (x < 0) x += m;
    return x;
}

namespace detail {

inline int jacobi_u64(std::uint64_t a, std::uint64_t n) {
    // n odd positive; a already reduced mod n
    int result = 1;
    while (a != 0) {
        int tz = __builtin_ctzll(a);
        a >>= tz;
        if ((tz & 1) != 0) {
            std::uint64_t n8 = n & 7;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        if ((a & 3) == 3 && (n & 3) == 3) result = -result;
        std::uint64_t t = a; a = n % t; n = t;
    }
    return n == 1 ? result : 0;
}

}  // namespace detail

// Jacobi symbol (a/n), n odd positive.  0 when gcd(a, n) > 1.
inline int jacobi(const BigInt& a, const BigInt& n) {
    if (n <= 0 || (n & 1) == 0)
        throw std::domain_error("jacobi: n must be odd positive");
    BigInt aa = a % n;
    if (aa < 0) aa += n;
    if (fits_u64(n))
        return detail::jacobi_u64(to_u64(aa), to_u64(n));
    BigInt nn = n;
    int result = 1;
    while (aa != 0) {
        unsigned tz = boost::multiprecision::lsb(aa);
        aa >>= tz;
        if ((tz & 1) != 0) {
            unsigned n8 = (nn & 7).convert_to<unsigned>();
            if (n8 == 3 || n8 == 5) result = -result;
        }
        if ((aa & 3) == 3 && (nn & 3) == 3) result = -result;
        std::swap(aa, nn);
        aa %= nn;
    }
    return nn == 1 ? result : 0;
}

// true when a proves n composite (n odd >= 3)
inline bool miller_rabin_witness(const BigInt& n, const BigInt& a) {
    BigInt base = a % n;
    if (base < 0) base += n;
    if (base <= 1 || base == n - 1) return false;
    BigInt d = n - 1;
    unsigned s = boost::multiprecision::lsb(d);
    d >>= s;
    BigInt x = mod_pow(base, d, n);
    if (x == 1 || x == n - 1) return false;
    for (unsigned i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return false;
    }
    return true;
}

enum class PrimalityVerdict { Composite, ProbablePrime, ProvenPrime };

namespace detail {

// strong Lucas probable prime test, Selfridge parameters; n odd >= 3,
// not a perfect square, gcd(n, 2) = 1
inline bool strong_lucas_probable_prime(const BigInt& n) {
    BigInt d_search = 5;
    int sign = 1;
    BigInt D;
    for (;;) {
        D = sign > 0 ? d_search : -d_search;
        int j = jacobi(D, n);
        if (j == -1) break;
        if (j == 0 && boost::multiprecision::abs(D) != n) return false;
        d_search += 2;
        sign = -sign;
        if (d_search > 1000)
            throw std::logic_error("strong_lucas: no D found (square input?)");
    }
    // P = 1, Q = (1 - D) / 4
    BigInt q = (1 - D) / 4;
    BigInt delta = n + 1;
    unsigned s = boost::multiprecision::lsb(delta);
    BigInt dd = delta >> s;

    auto mod = [&](BigInt v) { v %= n; if (v < 0) v += n; return v; };
    // ladder for U_dd, V_dd by msb-first doubling
    BigInt u = 1, v = 1, qk = mod(q);
    for (int i = static_cast<int>(msb_index(dd)) - 1; i >= 0; --i) {
        // double: U_2k = U V, V_2k = V^2 - 2 Q^k
        u = mod(u * v);
        v = mod(v * v - 2 * qk);
        qk = mod(qk * qk);
        if (boost::multiprecision::bit_test(dd, static_cast<unsigned>(i))) {
            // add one: U' = (P U + V)/2, V' = (D U + P V)/2  with P = 1
            BigInt u2 = u + v;
            BigInt v2 = D * u + v;
            if ((u2 & 1) != 0) u2 += n;
            if ((v2 & 1) != 0) v2 += n;
            u = mod(u2 >> 1);
            v = mod(v2 >> 1);
            qk = mod(qk * q);
        }
    }
    if (u == 0 || v == 0) return true;
    for (unsigned r = 1; r < s; ++r) {
        v = mod(v * v - 2 * qk);
        qk = mod(qk * qk);
        if (v == 0) return true;
    }
    return false;
}

}  // namespace detail

// Deterministic below the published Miller-Rabin witness bound, so the
// verdict there is ProvenPrime; beyond it a base-2 strong test plus a strong
// Lucas test yields ProbablePrime.
inline PrimalityVerdict is_prime(const BigInt& n) {
    static const unsigned small_primes[] = {
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
        67, 71, 73, 79, 83, 89, 97};
    if (n < 2) return PrimalityVerdict::Composite;
    for (unsigned p : small_primes) {
        if (n == p) return PrimalityVerdict::ProvenPrime;
        if (n % p == 0) return PrimalityVerdict::Composite;
    }
    static const BigInt det_bound("3317044064679887385961981");
    if (n < det_bound) {
        for (unsigned a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
            if (miller_rabin_witness(n, a)) return PrimalityVerdict::Composite;
        }
        return PrimalityVerdict::ProvenPrime;
    }
    if (miller_rabin_witness(n, 2)) return PrimalityVerdict::Composite;
    BigInt r = isqrt(n);
    if (r * r == n) return PrimalityVerdict::Composite;
    return detail::strong_lucas_probable_prime(n) ? PrimalityVerdict::ProbablePrime
                                                  : PrimalityVerdict::Composite;
}

// probabilistic Miller-Rabin with random bases; false = proven composite
bool miller_rabin(const BigInt& n, unsigned rounds, Rng& rng);

struct CrtResult {
    BigInt value;    // representative in (-M/2, M/2]
    BigInt modulus;  // M, product of the input moduli
};

// Chinese remainder for pairwise coprime moduli, result in (-M/2, M/2].
inline CrtResult crt_signed(const std::vector<std::pair<BigInt, BigInt>>& residues) {
    if (residues.empty()) throw std::invalid_argument("crt_signed: no residues");
    BigInt x = 0, m = 1;
    for (const auto& [r, mi] : residues) {
        if (mi < 2) throw std::invalid_argument("crt_signed: modulus < 2");
        auto minv = mod_inverse(m % mi, mi);
        if (!minv) throw std::invalid_argument("crt_signed: moduli not coprime");
        BigInt delta = (r - x) % mi;
        if (delta < 0) delta += mi;
        x += m * (delta * *minv % mi);
        m *= mi;
    }
    x %= m;
    if (x < 0) x += m;
    if (2 * x > m) x -= m;
    return {x, m};
}

// sum_{t=0}^{m-1} (t^2 - a / m), Jacobi symbols; m odd positive.  O(m).
inline std::int64_t complete_char_sum(const BigInt& a, const BigInt& m) {
    if (m <= 0 || (m & 1) == 0)
        throw std::domain_error("complete_char_sum: m must be odd positive");
    if (m == 1) return 1;  // single term, empty-product character
    if (!fits_u64(m) || to_u64(m) >= (std::uint64_t{1} << 32))
        throw std::domain_error("complete_char_sum: m too large to enumerate");
    std::uint64_t mm = to_u64(m);
    BigInt ar = a % m;
    if (ar < 0) ar += m;
    std::uint64_t av = to_u64(ar);
    std::int64_t sum = 0;
    for (std::uint64_t t = 0; t < mm; ++t) {
        std::uint64_t v = (t * t + mm - av) % mm;
        sum += detail::jacobi_u64(v, mm);
    }
    return sum;
}

// sum_{|t| <= T} (t^2 - a / m); exploits t <-> -t symmetry
inline std::int64_t incomplete_char_sum(const BigInt& a, const BigInt& m,
                                        std::uint64_t T) {
    if (m <= 0 || (m & 1) == 0)
        throw std::domain_error("incomplete_char_sum: m must be odd positive");
    if (m == 1) return static_cast<std::int64_t>(2 * T + 1);
    if (!fits_u64(m) || to_u64(m) >= (std::uint64_t{1} << 32))
        throw std::domain_error("incomplete_char_sum: m too large to enumerate");
    std::uint64_t mm = to_u64(m);
    BigInt ar = a % m;
    if (ar < 0) ar += m;
    std::uint64_t av = to_u64(ar);
    auto chi = [&](std::uint64_t t) {
        std::uint64_t tm = t % mm;
        return detail::jacobi_u64((tm * tm + mm - av) % mm, mm);
    };
    std::int64_t sum = chi(0);
    for (std::uint64_t t = 1; t <= T; ++t) sum += 2 * chi(t);
    return sum;
}

// ascending primes <= hi (simple sieve; desk scale)
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t hi) {
    if (hi > (std::uint64_t{1} << 28))
        throw std::domain_error("sieve_primes: bound too large");
    std::vector<bool> comp(hi + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= hi; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= hi; j += i) comp[j] = true;
    }
    return out;
}

// ascending primes in [L, 2L]
inline std::vector<std::uint64_t> primes_in_window(std::uint64_t L) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : sieve_primes(2 * L))
        if (p >= L) out.push_back(p);
    return out;
}

// number of primes ell in [L, 2L] dividing n
inline unsigned omega_window(const BigInt& n, std::uint64_t L) {
    unsigned count = 0;
    for (std::uint64_t p : primes_in_window(L))
        if (n % p == 0) ++count;
    return count;
}

}  // namespace elk
