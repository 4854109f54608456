#pragma once

// Exact integers and rationals (GMP), deterministic factoring, and the local
// number-theoretic primitives the quadratic-form solver is built on.

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quatsplit/errors.hpp"

namespace quatsplit {

using Int = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// small helpers

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

/// Non-negative remainder.
inline Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int pow_mod(const Int& base, const Int& exp, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int inverse_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InvalidArgument("no inverse of " + a.get_str() + " modulo " + m.get_str());
    return r;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

inline bool is_rational_square(const Rat& q) {
    return q >= 0 && is_perfect_square(q.get_num()) && is_perfect_square(q.get_den());
}

/// Exponent of p in n (n != 0).
inline unsigned valuation(const Int& n, const Int& p) {
    if (n == 0) throw InvalidArgument("valuation of zero");
    Int m = n;
    unsigned v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

/// Integers print as plain decimal, rationals as "p/q" with "/q" omitted when q = 1.
inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& q) {
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Int parse_int(std::string_view s) {
    std::string t(s);
    if (t.empty()) throw InvalidArgument("empty integer literal");
    if (t[0] == '+') t.erase(0, 1);
    Int n;
    if (t.empty() || n.set_str(t, 10) != 0) throw InvalidArgument("malformed integer '" + std::string(s) + "'");
    return n;
}

inline Rat parse_rat(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rat(parse_int(s));
    return make_rat(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

// ---------------------------------------------------------------------------
// places of Q

/// A place of Q: a rational prime or the real place.
class Place {
public:
    static Place infinity() { return Place(Int(0)); }
    static Place prime(const Int& p) {
        if (p < 2) throw InvalidArgument("invalid place " + p.get_str());
        return Place(p);
    }
    bool is_infinite() const { return p_ == 0; }
    const Int& p() const { return p_; }
    std::string to_string() const { return is_infinite() ? "inf" : p_.get_str(); }
    static Place parse(std::string_view s) {
        if (s == "inf" || s == "infinity") return infinity();
        return prime(parse_int(s));
    }
    friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }

private:
    explicit Place(Int p) : p_(std::move(p)) {}
    Int p_;
};

// ---------------------------------------------------------------------------
// primality and factoring

namespace detail {

// Thread-local so concurrent callers never share the budget.
inline thread_local std::optional<std::chrono::steady_clock::time_point> factor_deadline;

// Block count for capped attempts; unlike the deadline it makes success
// a function of the input alone.
inline thread_local std::optional<std::uint64_t> rho_block_allowance;
struct RhoAllowanceExhausted {};

inline void check_factor_budget() {
    if (factor_deadline && std::chrono::steady_clock::now() > *factor_deadline)
        throw FactorBudgetExceeded("factoring time budget exhausted");
    if (rho_block_allowance) {
        if (*rho_block_allowance == 0) throw RhoAllowanceExhausted{};
        --*rho_block_allowance;
    }
}

inline const std::vector<unsigned>& small_primes() {
    static const std::vector<unsigned> primes = [] {
        constexpr unsigned bound = 1u << 12;
        std::vector<bool> composite(bound + 1, false);
        std::vector<unsigned> out;
        for (unsigned i = 2; i <= bound; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (unsigned j = i * i; j <= bound; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

inline bool miller_rabin_round(const Int& n, const Int& base, const Int& odd_part, unsigned twos) {
    Int x = pow_mod(base, odd_part, n);
    const Int n_minus_1 = n - 1;
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned i = 1; i < twos; ++i) {
        x = x * x % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

}  // namespace detail

/// Installs a wall-clock budget for factoring calls on the current thread.
class FactorBudget {
public:
    explicit FactorBudget(std::chrono::milliseconds budget)
        : previous_(detail::factor_deadline) {
        detail::factor_deadline = std::chrono::steady_clock::now() + budget;
    }
    ~FactorBudget() { detail::factor_deadline = previous_; }
    FactorBudget(const FactorBudget&) = delete;
    FactorBudget& operator=(const FactorBudget&) = delete;

private:
    std::optional<std::chrono::steady_clock::time_point> previous_;
};

/// Primality verdict. `proven` is false only above 3.3e24, where the fixed
/// Miller-Rabin base set is no longer a proof.
struct PrimalityResult {
    bool prime;
    bool proven;
};

inline PrimalityResult primality(const Int& n) {
    if (n < 2) return {false, true};
    for (unsigned p : detail::small_primes()) {
        if (n == p) return {true, true};
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return {false, true};
    }
    Int odd_part = n - 1;
    unsigned twos = 0;
    while (mpz_even_p(odd_part.get_mpz_t())) {
        odd_part >>= 1;
        ++twos;
    }
    // Deterministic for n < 3317044064679887385961981.
    static constexpr unsigned bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned b : bases)
        if (!detail::miller_rabin_round(n, Int(b), odd_part, twos)) return {false, true};
    static const Int proof_bound("3317044064679887385961981");
    if (n < proof_bound) return {true, true};
    // Beyond the proof bound: a strong Lucas test on top (BPSW via GMP).
    const bool probable = mpz_probab_prime_p(n.get_mpz_t(), 2) != 0;
    return {probable, !probable};
}

inline bool is_prime(const Int& n) { return primality(n).prime; }

struct PrimePower {
    Int prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    int sign = 1;
    std::vector<PrimePower> factors;  // primes strictly increasing
    bool proven = true;               // every prime certified

    Int value() const {
        Int v = sign;
        for (const auto& f : factors) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
            v *= pe;
        }
        return v;
    }
    std::vector<Int> primes() const {
        std::vector<Int> out;
        for (const auto& f : factors) out.push_back(f.prime);
        return out;
    }
};

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// Brent's variant of Pollard rho for f(x) = x^2 + c.
inline u64 rho_u64(u64 n, u64 c) {
    auto f = [&](u64 x) { return static_cast<u64>((static_cast<u128>(x) * x + c) % n); };
    u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
    constexpr u64 block = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        for (u64 k = 0; k < r && g == 1; k += block) {
            check_factor_budget();
            ys = y;
            for (u64 i = 0; i < std::min(block, r - k); ++i) {
                y = f(y);
                q = static_cast<u64>(static_cast<u128>(q) * (x > y ? x - y : y - x) % n);
            }
            g = gcd_u64(q, n);
        }
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd_u64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

inline Int rho_mpz(const Int& n, unsigned long c) {
    Int y = 2, x, ys, q = 1, g = 1, diff;
    constexpr unsigned long block = 128;
    for (unsigned long r = 1; g == 1; r <<= 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) {
            y = y * y + c;
            y %= n;
        }
        for (unsigned long k = 0; k < r && g == 1; k += block) {
            check_factor_budget();
            ys = y;
            for (unsigned long i = 0; i < std::min(block, r - k); ++i) {
                y = y * y + c;
                y %= n;
                diff = x - y;
                q *= diff;
                q %= n;
            }
            g = gcd(q, n);
        }
    }
    if (g == n) {
        do {
            ys = ys * ys + c;
            ys %= n;
            g = gcd(Int(x - ys), n);
        } while (g == 1);
    }
    return abs_int(g);
}

/// A nontrivial divisor of a composite n with no prime factor below 4096.
/// Polynomial constants c = 1, 2, 3, ... are tried in order.
inline Int split_composite(const Int& n) {
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2;; ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) return root;
        }
    }
    for (unsigned long c = 1;; ++c) {
        Int g;
        if (n.fits_ulong_p() && sizeof(unsigned long) == 8) {
            g = static_cast<unsigned long>(rho_u64(n.get_ui(), c));
        } else {
            g = rho_mpz(n, c);
        }
        if (g != 1 && g != n) return g;
    }
}

/// Large primes found by recent factorizations. Forms built from one
/// algebra share big factors across coefficients, so later calls try these
/// before rho. Only speed depends on it; factorizations are unique.
inline std::vector<Int>& prime_hints() {
    thread_local std::vector<Int> hints;
    return hints;
}

inline void remember_prime(const Int& p) {
    auto& h = prime_hints();
    if (std::find(h.begin(), h.end(), p) != h.end()) return;
    if (h.size() >= 512) h.erase(h.begin());
    h.push_back(p);
}

inline void factor_into(const Int& n, std::vector<Int>& primes, bool& proven) {
    if (n == 1) return;
    const auto verdict = primality(n);
    if (verdict.prime) {
        primes.push_back(n);
        if (verdict.proven) remember_prime(n);
        proven = proven && verdict.proven;
        return;
    }
    const Int d = split_composite(n);
    factor_into(d, primes, proven);
    factor_into(Int(n / d), primes, proven);
}

}  // namespace detail

namespace detail {
inline Factorization factor_impl(const Int& n, bool use_hints);
}

/// Signed prime factorization of n != 0: trial division by the primes below
/// 4096, then Brent-Pollard rho with c = 1, 2, 3, ... on the cofactor.
inline Factorization factor(const Int& n) { return detail::factor_impl(n, true); }

/// Whether n factors within the given number of rho blocks (128
/// iterations each) after dividing out the given primes. Remembered primes
/// are not consulted, so the outcome depends on the arguments only.
inline bool try_factor(const Int& n, std::uint64_t rho_blocks, const std::vector<Int>& known = {}) {
    struct Reset {
        std::optional<std::uint64_t> saved = detail::rho_block_allowance;
        ~Reset() { detail::rho_block_allowance = saved; }
    } reset;
    Int m = abs_int(n);
    if (m == 0) return false;
    for (const auto& p : known)
        if (p > 1)
            while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    detail::rho_block_allowance = rho_blocks;
    try {
        detail::factor_impl(m, false);
        return true;
    } catch (const detail::RhoAllowanceExhausted&) {
        return false;
    }
}

/// Whether numerator and denominator of q both pass try_factor.
inline bool factors_quickly(const Rat& q, const std::vector<Int>& known = {}, std::uint64_t rho_blocks = 400) {
    return try_factor(q.get_num(), rho_blocks, known) && try_factor(q.get_den(), rho_blocks, known);
}

/// Primes of the numerators and denominators of qs.
inline std::vector<Int> primes_of(const std::vector<Rat>& qs) {
    std::vector<Int> out;
    for (const auto& q : qs)
        for (const Int* n : {&q.get_num(), &q.get_den()})
            if (*n != 0)
                for (const auto& pe : factor(*n).factors) out.push_back(pe.prime);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline Factorization detail::factor_impl(const Int& n, bool use_hints) {
    if (n == 0) throw InvalidArgument("factor: zero has no factorization");
    Factorization out;
    out.sign = n < 0 ? -1 : 1;
    Int m = abs_int(n);
    for (unsigned p : detail::small_primes()) {
        if (m == 1) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e) out.factors.push_back({Int(p), e});
    }
    if (m != 1) {
        std::vector<Int> primes;
        for (const auto& p : detail::prime_hints()) {
            if (m == 1 || !use_hints) break;
            while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
                mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
                primes.push_back(p);
            }
        }
        detail::factor_into(m, primes, out.proven);
        std::sort(primes.begin(), primes.end());
        for (const auto& p : primes) {
            if (!out.factors.empty() && out.factors.back().prime == p)
                ++out.factors.back().exponent;
            else
                out.factors.push_back({p, 1});
        }
    }
    return out;
}

struct SquarefreeSplit {
    Int squarefree;  // carries the sign
    Int cofactor;    // positive
};

/// n = squarefree * cofactor^2.
inline SquarefreeSplit squarefree_split(const Int& n) {
    const auto f = factor(n);
    SquarefreeSplit out{Int(f.sign), Int(1)};
    for (const auto& [p, e] : f.factors) {
        if (e % 2) out.squarefree *= p;
        for (unsigned i = 0; i < e / 2; ++i) out.cofactor *= p;
    }
    return out;
}

/// Pairwise coprime b_1..b_k > 1 such that every |n_i| is a product of
/// powers of them. Shared factors are split off by gcds before any factoring.
inline std::vector<Int> coprime_base(const std::vector<Int>& ns) {
    std::vector<Int> base;
    for (const auto& n : ns) {
        if (n == 0) throw InvalidArgument("coprime_base: zero entry");
        std::vector<Int> todo{abs_int(n)};
        while (!todo.empty()) {
            Int x = todo.back();
            todo.pop_back();
            if (x == 1) continue;
            bool merged = false;
            for (std::size_t i = 0; i < base.size(); ++i) {
                const Int g = gcd(x, base[i]);
                if (g == 1) continue;
                const Int b = base[i];
                base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
                todo.push_back(g);
                todo.push_back(Int(x / g));
                todo.push_back(Int(b / g));
                merged = true;
                break;
            }
            if (!merged) base.push_back(x);
        }
    }
    std::sort(base.begin(), base.end());
    return base;
}

/// squarefree_split of each entry, factoring only the coprime base so a
/// large product of already seen factors is never handed to rho whole.
inline std::vector<SquarefreeSplit> squarefree_split_all(const std::vector<Int>& ns) {
    std::vector<Int> primes;
    for (const auto& b : coprime_base(ns))
        for (const auto& pe : factor(b).factors) primes.push_back(pe.prime);
    std::vector<SquarefreeSplit> out;
    for (const auto& n : ns) {
        SquarefreeSplit s{Int(n < 0 ? -1 : 1), Int(1)};
        Int m = abs_int(n);
        for (const auto& p : primes) {
            unsigned e = 0;
            while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
                mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
                ++e;
            }
            if (e % 2) s.squarefree *= p;
            for (unsigned i = 0; i < e / 2; ++i) s.cofactor *= p;
        }
        if (m != 1) throw InternalInconsistency("squarefree_split_all: entry not covered by its coprime base");
        out.push_back(s);
    }
    return out;
}

inline bool is_squarefree(const Int& n) { return n != 0 && squarefree_split(n).cofactor == 1; }

/// Squarefree integer in the same square class as the nonzero rational q.
inline Int squarefree_part(const Rat& q) {
    if (q == 0) throw InvalidArgument("squarefree_part of zero");
    return squarefree_split(Int(q.get_num() * q.get_den())).squarefree;
}

// ---------------------------------------------------------------------------
// residues

/// Legendre symbol (a/p) for an odd prime p.
inline int legendre(const Int& a, const Int& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_prime(p))
        throw InvalidArgument("legendre: modulus " + p.get_str() + " is not an odd prime");
    return mpz_legendre(mod(a, p).get_mpz_t(), p.get_mpz_t());
}

/// Square root of a modulo a prime p, canonicalized to 0 <= r <= p/2.
/// Tonelli-Shanks with the smallest quadratic non-residue.
inline Int sqrt_mod(const Int& a, const Int& p) {
    if (p < 2 || !is_prime(p)) throw InvalidArgument("sqrt_mod: modulus " + p.get_str() + " is not prime");
    const Int r0 = mod(a, p);
    if (r0 == 0) return Int(0);
    if (p == 2) return Int(1);
    if (legendre(r0, p) != 1) throw NonResidue(r0.get_str() + " is not a square modulo " + p.get_str());
    Int q = p - 1;
    unsigned s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Int c = pow_mod(z, q, p);
    Int x = pow_mod(r0, Int((q + 1) / 2), p);
    Int t = pow_mod(r0, q, p);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        Int t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (unsigned j = 0; j + 1 < m - i; ++j) b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    const Int other = p - x;
    return other < x ? other : x;
}

struct Congruence {
    Int residue;
    Int modulus;
};

/// Solves the system x = r_i (mod m_i); moduli need not be coprime.
inline Congruence crt(const std::vector<Congruence>& system) {
    Congruence acc{Int(0), Int(1)};
    for (const auto& [r_in, m] : system) {
        if (m <= 0) throw InvalidArgument("crt: modulus must be positive");
        const Int r = mod(r_in, m);
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), acc.modulus.get_mpz_t(), m.get_mpz_t());
        const Int diff = r - acc.residue;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()))
            throw Inconsistent("crt: congruences conflict modulo " + g.get_str());
        const Int l = acc.modulus / g * m;
        acc.residue = mod(Int(acc.residue + acc.modulus * mod(Int(diff / g * s), Int(m / g))), l);
        acc.modulus = l;
    }
    return acc;
}

/// Some r with r^2 = a (mod n) for squarefree n > 0: canonical root per
/// prime, assembled by CRT. Throws NonResidue when none exists.
inline Int sqrt_mod_squarefree(const Int& a, const Int& n) {
    if (n <= 0) throw InvalidArgument("sqrt_mod_squarefree: modulus must be positive");
    if (n == 1) return Int(0);
    std::vector<Congruence> parts;
    for (const auto& [p, e] : factor(n).factors) {
        if (e != 1) throw InvalidArgument("sqrt_mod_squarefree: modulus not squarefree");
        parts.push_back({sqrt_mod(a, p), p});
    }
    return crt(parts).residue;
}

// ---------------------------------------------------------------------------
// Hilbert symbols and local squares

namespace detail {

// Integer representative of the square class of q (same class, nonzero).
inline Int square_class_rep(const Rat& q) {
    if (q == 0) throw InvalidArgument("zero has no square class");
    return q.get_num() * q.get_den();
}

inline int hilbert_int(const Int& a_in, const Int& b_in, const Int& p) {
    if (p == 2) {
        Int a = a_in, b = b_in;
        const unsigned alpha = valuation(a, p), beta = valuation(b, p);
        a >>= alpha;
        b >>= beta;
        const auto eps = [](const Int& u) { return mod(u, Int(4)) == 3 ? 1 : 0; };
        const auto omega = [](const Int& u) {
            const Int r = mod(u, Int(8));
            return (r == 3 || r == 5) ? 1 : 0;
        };
        const int e = eps(a) * eps(b) + static_cast<int>(alpha % 2) * omega(b) + static_cast<int>(beta % 2) * omega(a);
        return e % 2 ? -1 : 1;
    }
    const unsigned alpha = valuation(a_in, p), beta = valuation(b_in, p);
    Int u = a_in, v = b_in;
    for (unsigned i = 0; i < alpha; ++i) mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
    for (unsigned i = 0; i < beta; ++i) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    int sign = 1;
    if ((alpha % 2) && (beta % 2) && mod(p, Int(4)) == 3) sign = -sign;
    if (beta % 2) sign *= mpz_legendre(mod(u, p).get_mpz_t(), p.get_mpz_t());
    if (alpha % 2) sign *= mpz_legendre(mod(v, p).get_mpz_t(), p.get_mpz_t());
    return sign;
}

}  // namespace detail

/// Hilbert symbol (a, b)_v: +1 iff a x^2 + b y^2 = z^2 has a nontrivial
/// solution over Q_v. Uses the epsilon/omega formula at 2.
inline int hilbert(const Rat& a, const Rat& b, const Place& place) {
    if (a == 0 || b == 0) throw InvalidArgument("hilbert: arguments must be nonzero");
    if (place.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    if (!is_prime(place.p())) throw InvalidArgument("hilbert: place " + place.p().get_str() + " is not prime");
    return detail::hilbert_int(detail::square_class_rep(a), detail::square_class_rep(b), place.p());
}

/// Whether the nonzero rational q is a square in Q_v.
inline bool is_local_square(const Rat& q, const Place& place) {
    if (q == 0) throw InvalidArgument("is_local_square of zero");
    if (place.is_infinite()) return q > 0;
    const Int& p = place.p();
    Int n = detail::square_class_rep(q);
    const unsigned v = valuation(n, p);
    if (v % 2) return false;
    for (unsigned i = 0; i < v; ++i) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    if (p == 2) return mod(n, Int(8)) == 1;
    return mpz_legendre(mod(n, p).get_mpz_t(), p.get_mpz_t()) == 1;
}

}  // namespace quatsplit
