#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <elk/bigint.hpp>
#include <elk/poly.hpp>

namespace elk {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

class ValidationError : public std::runtime_error {
public:
    ValidationError(unsigned ell, const std::string& what)
        : std::runtime_error("level " + std::to_string(ell) + ": " + what) {}
};

// Requesting a level the database does not hold.  The point-counting loop
// turns this into its "database exhausted" failure.
class KeyMissingError : public std::runtime_error {
public:
    explicit KeyMissingError(unsigned ell)
        : std::runtime_error("modular polynomial level " +
                             std::to_string(ell) + " not in database"),
          ell_(ell) {}
    unsigned level() const { return ell_; }

private:
    unsigned ell_;
};

// Symmetric bivariate polynomial with integer coefficients, stored for
// i >= j only; the (j, i) mirror is implied.
struct ModPoly {
    unsigned ell = 0;
    std::map<std::pair<unsigned, unsigned>, BigInt> coeff;

    const BigInt& at(unsigned i, unsigned j) const {
        static const BigInt kZero = 0;
        if (i < j) std::swap(i, j);
        auto it = coeff.find({i, j});
        return it == coeff.end() ? kZero : it->second;
    }
    std::size_t term_count() const { return coeff.size(); }
};

// True iff phi == (X^ell - Y)(X - Y^ell) modulo ell, coefficientwise: the
// classical congruence, used as a bit-level integrity check of the tables.
inline bool validate_kronecker(const ModPoly& phi) {
    unsigned L = phi.ell;
    auto expect = [&](unsigned i, unsigned j) -> int {
        if (i == L + 1 && j == 0) return 1;
        if (i == L && j == L) return -1;
        if (i == 1 && j == 1) return -1;
        return 0;
    };
    // every stored coefficient must reduce to the expected value
    for (const auto& [ij, c] : phi.coeff) {
        BigInt r = (c - expect(ij.first, ij.second)) % L;
        if (r != 0) return false;
    }
    // positions required to be nonzero mod ell must actually be present
    for (auto [i, j] : {std::pair<unsigned, unsigned>{L + 1, 0},
                        {L, L},
                        {1, 1}}) {
        if (phi.coeff.find({i, j}) == phi.coeff.end()) return false;
    }
    return true;
}

inline void validate_structure(const ModPoly& phi) {
    unsigned L = phi.ell;
    if (L < 2) throw ValidationError(L, "level must be a prime >= 2");
    unsigned maxi = 0;
    for (const auto& [ij, c] : phi.coeff) {
        auto [i, j] = ij;
        if (i < j) throw ValidationError(L, "stored key with i < j");
        if (i > L + 1)
            throw ValidationError(L, "degree exceeds ell+1");
        if (c == 0) throw ValidationError(L, "explicit zero coefficient");
        if (i == L + 1 && j > 0)
            throw ValidationError(L, "leading terms beyond X^(ell+1)");
        maxi = std::max(maxi, i);
    }
    if (phi.at(L + 1, 0) != 1)
        throw ValidationError(L, "leading coefficient is not 1");
    if (maxi != L + 1) throw ValidationError(L, "degree below ell+1");
    if (!validate_kronecker(phi))
        throw ValidationError(L, "Kronecker congruence check failed");
}

namespace detail {
inline std::string strip(const std::string& s) {
    auto cut = s.find('#');
    std::string t = cut == std::string::npos ? s : s.substr(0, cut);
    std::size_t a = t.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = t.find_last_not_of(" \t\r");
    return t.substr(a, b - a + 1);
}
}  // namespace detail

class ModPolyDb {
public:
    // Parses the text format: `ell <L>` opens a record, `i j c` lines follow
    // (i >= j), a blank line closes it.  `#` comments anywhere.
    static ModPolyDb from_stream(std::istream& in) {
        ModPolyDb db;
        std::string raw;
        std::size_t lineno = 0;
        bool in_record = false;
        ModPoly cur;
        auto close = [&]() {
            if (!in_record) return;
            validate_structure(cur);
            if (!db.levels_.emplace(cur.ell, std::move(cur)).second)
                throw ValidationError(cur.ell, "duplicate level");
            cur = ModPoly{};
            in_record = false;
        };
        bool comment_only;
        while (std::getline(in, raw)) {
            ++lineno;
            comment_only = !raw.empty() && detail::strip(raw).empty() &&
                           raw.find('#') != std::string::npos;
            std::string line = detail::strip(raw);
            if (line.empty()) {
                if (!comment_only) close();
                continue;
            }
            std::istringstream ls(line);
            if (!in_record) {
                std::string kw;
                unsigned L;
                if (!(ls >> kw >> L) || kw != "ell")
                    throw ParseError(lineno, "expected `ell <level>`");
                cur.ell = L;
                in_record = true;
            } else {
                unsigned i, j;
                std::string cs;
                if (!(ls >> i >> j >> cs))
                    throw ParseError(lineno, "expected `i j coefficient`");
                std::string extra;
                if (ls >> extra)
                    throw ParseError(lineno, "trailing tokens");
                if (i < j) throw ParseError(lineno, "i < j");
                BigInt c;
                try {
                    c = BigInt(cs);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "bad coefficient `" + cs + "`");
                }
                if (!cur.coeff.emplace(std::pair{i, j}, std::move(c)).second)
                    throw ParseError(lineno, "duplicate monomial");
            }
        }
        close();
        return db;
    }

    static ModPolyDb from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        return from_stream(in);
    }

    // Loads every regular *.txt file in the directory (sorted for
    // determinism) into one database.
    static ModPolyDb from_dir(const std::filesystem::path& dir) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".txt")
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::runtime_error("no .txt files in " + dir.string());
        ModPolyDb db;
        for (const auto& f : files) {
            ModPolyDb part = from_file(f);
            for (auto& [L, phi] : part.levels_)
                if (!db.levels_.emplace(L, std::move(phi)).second)
                    throw ValidationError(L, "duplicate level across files");
        }
        return db;
    }

    static ModPolyDb from_path(const std::filesystem::path& p) {
        return std::filesystem::is_directory(p) ? from_dir(p) : from_file(p);
    }

    // Default directory: $ELK_MODPOLY_DIR, else the bundled data directory
    // baked in at configure time.
    static std::filesystem::path default_dir() {
        if (const char* env = std::getenv("ELK_MODPOLY_DIR")) return env;
#ifdef ELK_DATA_DIR
        return std::filesystem::path(ELK_DATA_DIR) / "modpoly";
#else
        return "data/modpoly";
#endif
    }

    const ModPoly* find(unsigned ell) const {
        auto it = levels_.find(ell);
        return it == levels_.end() ? nullptr : &it->second;
    }
    const ModPoly& require(unsigned ell) const {
        const ModPoly* p = find(ell);
        if (!p) throw KeyMissingError(ell);
        return *p;
    }
    std::vector<unsigned> levels() const {
        std::vector<unsigned> out;
        out.reserve(levels_.size());
        for (const auto& [L, phi] : levels_) out.push_back(L);
        return out;
    }
    std::size_t size() const { return levels_.size(); }
    void insert(ModPoly phi) {
        unsigned L = phi.ell;
        if (!levels_.emplace(L, std::move(phi)).second)
            throw ValidationError(L, "duplicate level");
    }

private:
    std::map<unsigned, ModPoly> levels_;
};

// Canonical serialization; byte-identical with the bundled files.
inline void write_level(std::ostream& out, const ModPoly& phi) {
    out << "# classical modular polynomial, level " << phi.ell << "\n"
        << "# lines: i j c  with i >= j; the symmetric completion is "
           "implied\n"
        << "ell " << phi.ell << "\n";
    // map orders keys ascending; emit descending
    for (auto it = phi.coeff.rbegin(); it != phi.coeff.rend(); ++it)
        out << it->first.first << " " << it->first.second << " "
            << it->second << "\n";
    out << "\n";
}

// phi(j, X) over the field: univariate of degree ell+1, monic.
template <class F>
Poly<F> eval_phi_at_j(const F& k, const ModPoly& phi,
                      const typename F::Elem& jv) {
    unsigned n = phi.ell + 1;
    std::vector<typename F::Elem> jpow(n + 1);
    jpow[0] = k.one();
    for (unsigned t = 1; t <= n; ++t) jpow[t] = k.mul(jpow[t - 1], jv);
    Poly<F> out;
    out.c.assign(n + 1, k.zero());
    for (const auto& [ij, c] : phi.coeff) {
        auto [i, j] = ij;
        auto ce = k.from_int(c);
        out.c[i] = k.add(out.c[i], k.mul(ce, jpow[j]));
        if (i != j) out.c[j] = k.add(out.c[j], k.mul(ce, jpow[i]));
    }
    poly_trim(k, out);
    return out;
}

// Value and first/second partial derivatives of phi at (x0, y0).
template <class F>
struct PhiPartials {
    typename F::Elem phi, px, py, pxx, pxy, pyy;
};

template <class F>
PhiPartials<F> phi_partials_at(const F& k, const ModPoly& phi,
                               const typename F::Elem& x0,
                               const typename F::Elem& y0) {
    unsigned n = phi.ell + 1;
    std::vector<typename F::Elem> xp(n + 1), yp(n + 1);
    xp[0] = yp[0] = k.one();
    for (unsigned t = 1; t <= n; ++t) {
        xp[t] = k.mul(xp[t - 1], x0);
        yp[t] = k.mul(yp[t - 1], y0);
    }
    PhiPartials<F> r{k.zero(), k.zero(), k.zero(),
                     k.zero(), k.zero(), k.zero()};
    auto term = [&](unsigned i, unsigned j, const typename F::Elem& ce) {
        auto add_to = [&](typename F::Elem& acc, BigInt fac, unsigned di,
                          unsigned dj) {
            if (di > i || dj > j || fac == 0) return;
            auto v = k.mul(ce, k.from_int(fac));
            v = k.mul(v, xp[i - di]);
            v = k.mul(v, yp[j - dj]);
            acc = k.add(acc, v);
        };
        add_to(r.phi, 1, 0, 0);
        add_to(r.px, i, 1, 0);
        add_to(r.py, j, 0, 1);
        add_to(r.pxx, BigInt(i) * (i - 1), 2, 0);
        add_to(r.pxy, BigInt(i) * j, 1, 1);
        add_to(r.pyy, BigInt(j) * (j - 1), 0, 2);
    };
    for (const auto& [ij, c] : phi.coeff) {
        auto [i, j] = ij;
        auto ce = k.from_int(c);
        term(i, j, ce);
        if (i != j) term(j, i, ce);
    }
    return r;
}

}  // namespace elk
