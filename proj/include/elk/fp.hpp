#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <elk/bigint.hpp>

namespace elk {

// Thrown when an element has no inverse mod p.  For prime p this never fires
// on nonzero input; for composite p the gcd is a nontrivial factor, which the
// point-counting layer converts into a compositeness verdict.
class NonInvertibleError : public std::runtime_error {
public:
    NonInvertibleError(BigInt witness, BigInt modulus)
        : std::runtime_error("non-invertible element mod " + modulus.str() +
                             " (gcd " + witness.str() + ")"),
          witness_(std::move(witness)),
          modulus_(std::move(modulus)) {}
    const BigInt& witness() const { return witness_; }
    const BigInt& modulus() const { return modulus_; }

private:
    BigInt witness_;
    BigInt modulus_;
};

// Arithmetic in Z/p for p < 2^62, elements as uint64_t in [0, p).
// p is not required to be prime; inv reports failures via NonInvertibleError.
struct Fp64 {
    using Elem = std::uint64_t;
    std::uint64_t p;

    explicit Fp64(std::uint64_t modulus) : p(modulus) {
        if (modulus < 2 || modulus >= (std::uint64_t{1} << 62))
            throw std::domain_error("Fp64: modulus out of range");
    }

    BigInt modulus() const { return BigInt(p); }
    Elem zero() const { return 0; }
    Elem one() const { return p == 1 ? 0 : 1; }

    Elem from_int(const BigInt& v) const {
        BigInt r = v % p;
        if (r < 0) r += p;
        return r.convert_to<std::uint64_t>();
    }
    Elem from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        return static_cast<std::uint64_t>(r);
    }
    BigInt to_int(Elem a) const { return BigInt(a); }

    Elem add(Elem a, Elem b) const {
        std::uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(a) * b % p);
    }
    Elem pow(Elem a, BigInt e) const {
        if (e < 0) return pow(inv(a), -e);
        Elem result = one();
        Elem base = a;
        while (e != 0) {
            if ((e & 1) != 0) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
    Elem inv(Elem a) const {
        std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a);
        std::int64_t x0 = 0, x1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t t = r0 - q * r1; r0 = r1; r1 = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        if (r0 != 1) throw NonInvertibleError(BigInt(r0), BigInt(p));
        if (x0 < 0) x0 += static_cast<std::int64_t>(p);
        return static_cast<std::uint64_t>(x0);
    }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
};

// Arithmetic in Z/p for arbitrary p, elements as BigInt in [0, p).
struct FpBig {
    using Elem = BigInt;
    BigInt p;

    explicit FpBig(BigInt modulus) : p(std::move(modulus)) {
        if (p < 2) throw std::domain_error("FpBig: modulus out of range");
    }

    BigInt modulus() const { return p; }
    Elem zero() const { return 0; }
    Elem one() const { return p == 1 ? 0 : 1; }

    Elem from_int(const BigInt& v) const {
        BigInt r = v % p;
        if (r < 0) r += p;
        return r;
    }
    BigInt to_int(const Elem& a) const { return a; }

    Elem add(const Elem& a, const Elem& b) const {
        BigInt s = a + b;
        if (s >= p) s -= p;
        return s;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        BigInt s = a - b;
        if (s < 0) s += p;
        return s;
    }
    Elem neg(const Elem& a) const { return a == 0 ? BigInt(0) : BigInt(p - a); }
    Elem mul(const Elem& a, const Elem& b) const { return a * b % p; }
    Elem pow(const Elem& a, const BigInt& e) const {
        if (e < 0) return mod_pow(inv(a), -e, p);
        return mod_pow(a, e, p);
    }
    Elem inv(const Elem& a) const {
        BigInt x, y;
        BigInt g = ext_gcd(a, p, x, y);
        if (g != 1) throw NonInvertibleError(g, p);
        x %= p;
        if (x < 0) x += p;
        return x;
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
};

}  // namespace elk
