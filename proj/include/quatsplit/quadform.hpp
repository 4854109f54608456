#pragma once

// Rational quadratic forms: diagonalization, Legendre normalization of
// ternaries, local solvability, and deterministic isotropic-vector search
// in dimensions 2 to 6.

#include <array>
#include <bit>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "quatsplit/exact_arith.hpp"
#include "quatsplit/lattice.hpp"
#include "quatsplit/matrix.hpp"
#include "quatsplit/reduction.hpp"

namespace quatsplit {

class QuadForm {
public:
    explicit QuadForm(Matrix<Rat> gram) : gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols()) throw DimensionMismatch("Gram matrix must be square");
        for (std::size_t i = 0; i < gram_.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (gram_(i, j) != gram_(j, i)) throw InvalidArgument("Gram matrix must be symmetric");
    }
    static QuadForm diagonal(const std::vector<Rat>& coeffs) {
        Matrix<Rat> g(coeffs.size(), coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) g(i, i) = coeffs[i];
        return QuadForm(std::move(g));
    }
    std::size_t dim() const { return gram_.rows(); }
    const Matrix<Rat>& gram() const { return gram_; }

private:
    Matrix<Rat> gram_;
};

inline Rat evaluate(const QuadForm& q, const std::vector<Rat>& v) {
    if (v.size() != q.dim()) throw DimensionMismatch("evaluate: vector length does not match the form");
    Rat s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        Rat row = 0;
        for (std::size_t j = 0; j < v.size(); ++j) row += q.gram()(i, j) * v[j];
        s += v[i] * row;
    }
    return s;
}

inline Rat evaluate(const QuadForm& q, const std::vector<Int>& v) {
    return evaluate(q, std::vector<Rat>(v.begin(), v.end()));
}

/// transform^T * gram * transform = diag(coeffs). When every pivot is
/// nonzero the transform is Lagrange's unit upper triangular substitution;
/// otherwise its columns are rescaled to primitive integer vectors with
/// positive leading entry.
struct DiagonalForm {
    std::vector<Rat> coeffs;
    Matrix<Rat> transform;
    bool degenerate = false;
};

/// Evidence that a form has no nontrivial zero over Q_v. `form` is the
/// integral diagonal form the obstruction was found on.
struct AnisotropyWitness {
    Place place;
    std::string kind;  // "definite", "nonresidue", "hasse"
    std::vector<Int> form;
    std::optional<Int> value;  // the offending non-residue, for "nonresidue"
};

struct IsotropicVector {
    std::vector<Int> coords;  // primitive, q(coords) = 0
};

using SolveResult = std::variant<IsotropicVector, AnisotropyWitness>;

/// a x^2 + b y^2 + c z^2 with a, b, c squarefree and pairwise coprime,
/// obtained from an input form by new_i = var_scale_i * old_i.
struct LegendreTernary {
    std::array<Int, 3> coeffs;
    std::array<Rat, 3> var_scale{Rat(1), Rat(1), Rat(1)};
    std::optional<AnisotropyWitness> real_witness;
};

struct SolveOptions {
    /// Largest |t| tried directly before building t by CRT. Small common
    /// values keep the glued zero, and everything derived from it, small.
    unsigned long small_value_limit = 20000;
    /// Minimize and LLL-reduce the lattice before diagonalizing (n >= 3).
    /// Costs a factorization of the determinant; pays off when the form has
    /// a large determinant with big square factors.
    bool reduce = false;
    /// Candidates tried in the prime scan for the common value t.
    unsigned long prime_scan_limit = 200000;
    /// Largest |t| tried by the fallback enumeration.
    unsigned long fallback_limit = 100000;
};

// ---------------------------------------------------------------------------
// vector helpers

namespace detail {

/// Clears denominators, divides by the content, and makes the first nonzero
/// entry positive.
inline std::vector<Int> primitive(const std::vector<Rat>& v) {
    Int den = 1;
    for (const auto& x : v) den = lcm(den, x.get_den());
    std::vector<Int> out;
    Int g = 0;
    for (const auto& x : v) {
        out.push_back(Int(x.get_num() * (den / x.get_den())));
        g = gcd(g, out.back());
    }
    if (g == 0) return out;
    int sign = 0;
    for (const auto& x : out)
        if (x != 0) {
            sign = x < 0 ? -1 : 1;
            break;
        }
    for (auto& x : out) x = x / g * sign;
    return out;
}

inline std::vector<Int> primitive(const std::vector<Int>& v) {
    return primitive(std::vector<Rat>(v.begin(), v.end()));
}

inline std::vector<Rat> to_rat(const std::vector<Int>& v) { return {v.begin(), v.end()}; }

inline Int eval_diag(const std::vector<Int>& coeffs, const std::vector<Int>& v) {
    Int s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += coeffs[i] * v[i] * v[i];
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// diagonalization

inline DiagonalForm diagonalize(const QuadForm& q) {
    const std::size_t n = q.dim();
    Matrix<Rat> G = q.gram();
    Matrix<Rat> U = Matrix<Rat>::identity(n);
    // Congruence by elementary column operations, applied to G on both sides.
    auto add_multiple = [&](std::size_t dst, std::size_t src, const Rat& k) {
        for (std::size_t r = 0; r < n; ++r) U(r, dst) += k * U(r, src);
        for (std::size_t r = 0; r < n; ++r) G(r, dst) += k * G(r, src);
        for (std::size_t c = 0; c < n; ++c) G(dst, c) += k * G(src, c);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < n; ++r) std::swap(U(r, a), U(r, b));
        for (std::size_t r = 0; r < n; ++r) std::swap(G(r, a), G(r, b));
        for (std::size_t c = 0; c < n; ++c) std::swap(G(a, c), G(b, c));
    };
    bool pivot_fixed = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (G(k, k) == 0) {
            std::size_t j = k + 1;
            while (j < n && G(j, j) == 0) ++j;
            if (j < n) {
                swap_cols(k, j);
            } else {
                j = k + 1;
                while (j < n && G(k, j) == 0) ++j;
                if (j == n) continue;  // degenerate direction
                add_multiple(k, j, Rat(1));
            }
            pivot_fixed = true;
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (G(k, j) == 0) continue;
            add_multiple(j, k, Rat(-G(k, j) / G(k, k)));
        }
    }
    DiagonalForm out{{}, U, false};
    if (!pivot_fixed) {
        for (std::size_t c = 0; c < n; ++c) {
            out.coeffs.push_back(G(c, c));
            if (G(c, c) == 0) out.degenerate = true;
        }
        return out;
    }
    for (std::size_t c = 0; c < n; ++c) {
        const auto col = detail::primitive(U.column(c));
        Rat scale = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (U(r, c) != 0) {
                scale = Rat(col[r]) / U(r, c);
                break;
            }
        for (std::size_t r = 0; r < n; ++r) out.transform(r, c) = col[r];
        out.coeffs.push_back(G(c, c) * scale * scale);
        if (out.coeffs.back() == 0) out.degenerate = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// local theory

namespace detail {

inline Rat product(const std::vector<Rat>& v) {
    Rat p = 1;
    for (const auto& x : v) p *= x;
    return p;
}

inline int hasse_invariant(const std::vector<Rat>& a, const Place& place) {
    int h = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) h *= hilbert(a[i], a[j], place);
    return h;
}

}  // namespace detail

/// Whether the nondegenerate diagonal form has a nontrivial zero over Q_v,
/// decided from the discriminant and Hasse invariant.
inline bool is_isotropic_local(const std::vector<Rat>& coeffs, const Place& place) {
    for (const auto& c : coeffs)
        if (c == 0) throw InvalidArgument("is_isotropic_local: degenerate form");
    const std::size_t n = coeffs.size();
    if (n < 2) return false;
    if (place.is_infinite()) {
        bool pos = false, neg = false;
        for (const auto& c : coeffs) (c > 0 ? pos : neg) = true;
        return pos && neg;
    }
    if (!is_prime(place.p())) throw InvalidArgument("is_isotropic_local: place is not prime");
    const Rat d = detail::product(coeffs);
    const int c = detail::hasse_invariant(coeffs, place);
    switch (n) {
        case 2:
            return is_local_square(Rat(-d), place);
        case 3:
            return c == hilbert(Rat(-1), Rat(-d), place);
        case 4:
            return !is_local_square(d, place) || c == hilbert(Rat(-1), Rat(-1), place);
        default:
            return true;
    }
}

inline bool is_isotropic_local(const std::vector<Int>& coeffs, const Place& place) {
    return is_isotropic_local(detail::to_rat(coeffs), place);
}

inline bool is_isotropic_local(const DiagonalForm& diag, const Place& place) {
    if (diag.degenerate) throw InvalidArgument("is_isotropic_local: degenerate form");
    return is_isotropic_local(diag.coeffs, place);
}

/// A witness certifies anisotropy iff the local test fails at its place.
inline bool verify_witness(const AnisotropyWitness& w) {
    if (w.form.empty()) return false;
    for (const auto& c : w.form)
        if (c == 0) return false;
    if (!w.place.is_infinite() && !is_prime(w.place.p())) return false;
    return !is_isotropic_local(w.form, w.place);
}

namespace detail {

/// Odd primes dividing some coefficient, ascending, then 2, then the real
/// place: the order in which witnesses are searched.
inline std::vector<Place> candidate_places(const std::vector<Int>& coeffs) {
    std::vector<Int> primes;
    for (const auto& c : coeffs)
        for (const auto& p : factor(c).primes())
            if (p != 2) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    std::vector<Place> places;
    for (const auto& p : primes) places.push_back(Place::prime(p));
    places.push_back(Place::prime(Int(2)));
    places.push_back(Place::infinity());
    return places;
}

inline std::optional<AnisotropyWitness> find_witness(const std::vector<Int>& coeffs) {
    for (const auto& place : candidate_places(coeffs)) {
        if (is_isotropic_local(coeffs, place)) continue;
        AnisotropyWitness w{place, place.is_infinite() ? "definite" : "hasse", coeffs, std::nullopt};
        if (!place.is_infinite() && coeffs.size() == 3 && place.p() != 2) {
            // Legendre condition: -(product of the other two) is not a square mod p.
            for (std::size_t i = 0; i < 3; ++i) {
                if (!mpz_divisible_p(coeffs[i].get_mpz_t(), place.p().get_mpz_t())) continue;
                const Int other = -coeffs[(i + 1) % 3] * coeffs[(i + 2) % 3];
                if (mpz_divisible_p(other.get_mpz_t(), place.p().get_mpz_t())) continue;
                if (legendre(other, place.p()) == -1) {
                    w.kind = "nonresidue";
                    w.value = mod(other, place.p());
                }
            }
        }
        return w;
    }
    return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ternary forms

/// Equivalent Legendre form: integral, squarefree, pairwise coprime.
inline LegendreTernary minimize_ternary(const std::array<Rat, 3>& coeffs) {
    LegendreTernary out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (coeffs[i] == 0) throw ZeroCoefficient("minimize_ternary: zero coefficient");
        // (n/d) x^2 = n d (x/d)^2
        out.coeffs[i] = coeffs[i].get_num() * coeffs[i].get_den();
        out.var_scale[i] = Rat(1, 1) / Rat(coeffs[i].get_den());
    }
    auto strip_square = [&](std::size_t i) {
        const auto split = squarefree_split(out.coeffs[i]);
        out.coeffs[i] = split.squarefree;
        out.var_scale[i] *= split.cofactor;
    };
    for (std::size_t i = 0; i < 3; ++i) strip_square(i);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < 3 && !changed; ++i)
            for (std::size_t j = i + 1; j < 3 && !changed; ++j) {
                const Int g = gcd(out.coeffs[i], out.coeffs[j]);
                if (g == 1) continue;
                const std::size_t k = 3 - i - j;
                // Multiply the form by g and absorb g into x_i, x_j.
                out.coeffs[i] /= g;
                out.coeffs[j] /= g;
                out.coeffs[k] *= g;
                out.var_scale[i] *= g;
                out.var_scale[j] *= g;
                strip_square(k);
                changed = true;
            }
    }
    const bool all_pos = out.coeffs[0] > 0 && out.coeffs[1] > 0 && out.coeffs[2] > 0;
    const bool all_neg = out.coeffs[0] < 0 && out.coeffs[1] < 0 && out.coeffs[2] < 0;
    if (all_pos || all_neg)
        out.real_witness = AnisotropyWitness{Place::infinity(), "definite", {out.coeffs.begin(), out.coeffs.end()}, std::nullopt};
    return out;
}

namespace detail {

/// Row vector l reduced to (g, 0, 0) by unimodular column operations;
/// returns the accumulated unimodular matrix.
inline Matrix<Int> column_reduce(std::array<Int, 3> l) {
    Matrix<Int> U = Matrix<Int>::identity(3);
    auto nonzero_count = [&] { return (l[0] != 0) + (l[1] != 0) + (l[2] != 0); };
    while (nonzero_count() > 1) {
        std::size_t piv = 3;
        for (std::size_t i = 0; i < 3; ++i)
            if (l[i] != 0 && (piv == 3 || abs_int(l[i]) < abs_int(l[piv]))) piv = i;
        for (std::size_t j = 0; j < 3; ++j) {
            if (j == piv || l[j] == 0) continue;
            Int q;
            mpz_tdiv_q(q.get_mpz_t(), l[j].get_mpz_t(), l[piv].get_mpz_t());
            l[j] -= q * l[piv];
            for (std::size_t r = 0; r < 3; ++r) U(r, j) -= q * U(r, piv);
        }
    }
    std::size_t nz = 0;
    while (nz < 3 && l[nz] == 0) ++nz;
    if (nz != 0 && nz < 3)
        for (std::size_t r = 0; r < 3; ++r) std::swap(U(r, 0), U(r, nz));
    return U;
}

/// Lattice of (x, y, z) with a x^2 + b y^2 + c z^2 = 0 (mod |abc|), reduced
/// against |a| x^2 + |b| y^2 + |c| z^2; returns a zero among short
/// combinations of the reduced basis when one exists.
inline std::optional<std::vector<Int>> ternary_lattice_solve(const Int& a, const Int& b, const Int& c) {
    const Int A = abs_int(a), B = abs_int(b), C = abs_int(c);
    std::array<Int, 3> l{0, 0, 0};
    std::vector<Congruence> cx, cy, cz;
    auto add = [](std::vector<Congruence>& sys, const Int& r, const Int& m) { sys.push_back({r, m}); };
    if (A > 1) {  // y = mu z (mod |a|), mu^2 = -c/b
        const Int mu = sqrt_mod_squarefree(Int(-c * inverse_mod(mod(b, A), A)), A);
        add(cx, Int(0), A), add(cy, Int(1), A), add(cz, Int(-mu), A);
    }
    if (B > 1) {  // z = mu x (mod |b|), mu^2 = -a/c
        const Int mu = sqrt_mod_squarefree(Int(-a * inverse_mod(mod(c, B), B)), B);
        add(cx, Int(-mu), B), add(cy, Int(0), B), add(cz, Int(1), B);
    }
    if (C > 1) {  // x = mu y (mod |c|), mu^2 = -b/a
        const Int mu = sqrt_mod_squarefree(Int(-b * inverse_mod(mod(a, C), C)), C);
        add(cx, Int(1), C), add(cy, Int(-mu), C), add(cz, Int(0), C);
    }
    const Int N = A * B * C;
    Matrix<Int> basis(3, 3);
    if (N == 1) {
        basis = Matrix<Int>::identity(3);
    } else {
        l[0] = crt(cx).residue, l[1] = crt(cy).residue, l[2] = crt(cz).residue;
        const Matrix<Int> U = column_reduce(l);
        for (std::size_t r = 0; r < 3; ++r) {
            basis(0, r) = N * U(r, 0);
            basis(1, r) = U(r, 1);
            basis(2, r) = U(r, 2);
        }
    }
    Matrix<Int> gram(3, 3);
    gram(0, 0) = A, gram(1, 1) = B, gram(2, 2) = C;
    const auto reduced = lll_reduce(IntLattice{basis, gram});
    const auto& R = reduced.lattice.basis;
    const std::vector<Int> coeffs{a, b, c};
    std::optional<std::vector<Int>> best;
    Int best_norm;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                std::vector<Int> v(3);
                for (std::size_t col = 0; col < 3; ++col) v[col] = i * R(0, col) + j * R(1, col) + k * R(2, col);
                if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
                if (eval_diag(coeffs, v) != 0) continue;
                v = primitive(v);
                const Int norm = A * v[0] * v[0] + B * v[1] * v[1] + C * v[2] * v[2];
                if (!best || norm < best_norm || (norm == best_norm && v < *best)) best = v, best_norm = norm;
            }
    return best;
}

/// Classical descent for a x^2 + b y^2 = z^2 (squarefree a, b; known solvable).
inline std::array<Int, 3> legendre_descent(const Int& a, const Int& b) {
    if (a == 1) return {Int(1), Int(0), Int(1)};
    if (b == 1) return {Int(0), Int(1), Int(1)};
    if (a == -b) return {Int(1), Int(1), Int(0)};
    if (a < 0 && b < 0) throw InternalInconsistency("legendre_descent: definite form reached");
    if (abs_int(a) > abs_int(b)) {
        const auto s = legendre_descent(b, a);
        return {s[1], s[0], s[2]};
    }
    const Int B = abs_int(b);
    Int t = sqrt_mod_squarefree(a, B);  // |t| <= |b|/2 after centering
    if (2 * t > B) t -= B;
    const Int rest = (t * t - a) / b;
    if (rest == 0) throw InternalInconsistency("legendre_descent: square coefficient");
    const auto split = squarefree_split(rest);
    const Int& k = split.squarefree;
    const Int& m = split.cofactor;
    const auto s = legendre_descent(a, k);  // a X^2 + k Y^2 = Z^2
    const Int& X = s[0];
    const Int& Y = s[1];
    const Int& Z = s[2];
    std::array<Int, 3> out{Int(Z + t * X), Int(k * m * Y), Int(Z * t + a * X)};
    Int g = gcd(gcd(out[0], out[1]), out[2]);
    for (auto& x : out) x /= g;
    return out;
}

/// Shrinks a zero of a x^2 + b y^2 + c z^2 (Legendre form, mixed signs)
/// until the odd-signed coordinate satisfies its Holzer bound.
inline std::vector<Int> holzer_reduce(const std::array<Int, 3>& coeffs, std::vector<Int> v) {
    std::size_t odd = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const int s = coeffs[i] > 0 ? 1 : -1;
        int same = 0;
        for (std::size_t j = 0; j < 3; ++j) same += ((coeffs[j] > 0 ? 1 : -1) == s);
        if (same == 1) odd = i;
    }
    const std::size_t i1 = (odd + 1) % 3, i2 = (odd + 2) % 3;
    const Int A = abs_int(coeffs[i1]), B = abs_int(coeffs[i2]);
    Int X = abs_int(v[i1]), Y = abs_int(v[i2]), Z = abs_int(v[odd]);
    // A X^2 + B Y^2 = C Z^2; a line through the point with direction
    // (u, v, 0), u = lambda v (mod Z), meets the conic again at a point
    // whose coordinates are divisible by Z^2.
    while (Z * Z > A * B) {
        if (gcd(Y, Z) != 1) break;
        const Int lambda = mod(Int(X * inverse_mod(mod(Y, Z), Z)), Z);
        Matrix<Int> basis{{lambda, Int(1)}, {Z, Int(0)}};
        Matrix<Int> gram{{A, Int(0)}, {Int(0), B}};
        const auto red = lll_reduce(IntLattice{basis, gram});
        const auto& R = red.lattice.basis;
        std::optional<std::array<Int, 3>> best;
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
                if (i == 0 && j == 0) continue;
                const Int u = i * R(0, 0) + j * R(1, 0);
                const Int w = i * R(0, 1) + j * R(1, 1);
                const Int qd = A * u * u + B * w * w;
                std::array<Int, 3> p{Int(X * (B * w * w - A * u * u) - 2 * B * Y * u * w),
                                     Int(Y * (A * u * u - B * w * w) - 2 * A * X * u * w), Int(qd * Z)};
                const Int g = gcd(gcd(p[0], p[1]), p[2]);
                for (auto& x : p) x = abs_int(Int(x / g));
                if (!best || p[2] < (*best)[2] || (p[2] == (*best)[2] && p < *best)) best = p;
            }
        if (!best || (*best)[2] >= Z) break;
        X = (*best)[0], Y = (*best)[1], Z = (*best)[2];
    }
    std::vector<Int> out(3);
    out[i1] = X, out[i2] = Y, out[odd] = Z;
    return out;
}

}  // namespace detail

/// Primitive zero (non-negative entries, Holzer-reduced) of a Legendre
/// ternary, or a local obstruction.
inline SolveResult solve_ternary(const LegendreTernary& form) {
    const auto& [a, b, c] = form.coeffs;
    const std::vector<Int> coeffs{a, b, c};
    if (auto w = detail::find_witness(coeffs)) return *w;
    std::vector<Int> v;
    if (auto lat = detail::ternary_lattice_solve(a, b, c)) {
        v = *lat;
    } else {
        // a x^2 + b y^2 = -c z^2  ->  (-ac) X^2 + (-bc) Y^2 = Z^2 with Z = c z
        const auto s = detail::legendre_descent(Int(-a * c), Int(-b * c));
        if (!mpz_divisible_p(s[2].get_mpz_t(), c.get_mpz_t()))
            throw InternalInconsistency("solve_ternary: descent output not divisible by c");
        v = detail::primitive(std::vector<Int>{s[0], s[1], Int(s[2] / c)});
    }
    if (detail::eval_diag(coeffs, v) != 0) throw InternalInconsistency("solve_ternary: produced a non-zero");
    v = detail::holzer_reduce(form.coeffs, v);
    if (detail::eval_diag(coeffs, v) != 0) throw InternalInconsistency("solve_ternary: reduction broke the zero");
    return IsotropicVector{detail::primitive(v)};
}

// ---------------------------------------------------------------------------
// general solver

namespace detail {

inline SolveResult solve_diagonal_int(std::vector<Int> coeffs, const SolveOptions& opt);

/// Square-class representatives of Q_v^* / Q_v^{*2}.
inline std::vector<Int> square_class_reps(const Place& place) {
    if (place.is_infinite()) return {Int(1), Int(-1)};
    const Int& p = place.p();
    if (p == 2) return {Int(1), Int(3), Int(5), Int(7), Int(2), Int(6), Int(10), Int(14)};
    Int n = 2;
    while (legendre(n, p) != -1) ++n;
    return {Int(1), n, p, Int(p * n)};
}

inline std::vector<Int> with(const std::vector<Int>& v, const Int& extra) {
    auto out = v;
    out.push_back(extra);
    return out;
}

inline bool halves_isotropic_at(const std::vector<Int>& left, const std::vector<Int>& right, const Int& t,
                                const Place& place) {
    return is_isotropic_local(with(left, Int(-t)), place) && is_isotropic_local(with(right, t), place);
}

inline bool common_value_ok(const std::vector<Int>& left, const std::vector<Int>& right, const Int& t,
                            const std::vector<Int>& primes) {
    if (!halves_isotropic_at(left, right, t, Place::infinity())) return false;
    for (const auto& p : primes)
        if (!halves_isotropic_at(left, right, t, Place::prime(p))) return false;
    return true;
}

/// A nonzero t with left + <-t> and right + <t> both isotropic over Q.
/// Small squarefree t are tried first. Failing that, local classes are fixed
/// at the bad places, assembled by CRT, and completed by the first prime in
/// the resulting progression.
inline Int common_value(const std::vector<Int>& left, const std::vector<Int>& right, const SolveOptions& opt) {
    std::vector<Int> all = left;
    all.insert(all.end(), right.begin(), right.end());
    std::vector<Int> bad;
    for (const auto& c : all)
        for (const auto& p : factor(c).primes()) bad.push_back(p);
    bad.push_back(Int(2));
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());

    for (unsigned long m = 1; m <= opt.small_value_limit; ++m) {
        const auto fm = factor(Int(m));
        bool squarefree = true;
        for (const auto& pe : fm.factors) squarefree = squarefree && pe.exponent == 1;
        if (!squarefree) continue;
        for (const Int& t : {Int(m), Int(-Int(m))}) {
            auto primes = bad;
            for (const auto& pe : fm.factors)
                if (!std::binary_search(bad.begin(), bad.end(), pe.prime)) primes.push_back(pe.prime);
            if (common_value_ok(left, right, t, primes)) return t;
        }
    }

    auto pick = [&](const Place& place) -> Int {
        for (const auto& r : square_class_reps(place))
            if (halves_isotropic_at(left, right, r, place)) return r;
        throw InternalInconsistency("common_value: no common local class at " + place.to_string());
    };
    const Int sign = pick(Place::infinity());
    Int t0 = sign;
    std::vector<std::pair<Int, Int>> units;  // (p, unit part of the class at p)
    for (const auto& p : bad) {
        const Int r = pick(Place::prime(p));
        const bool ramified = mpz_divisible_p(r.get_mpz_t(), p.get_mpz_t());
        if (ramified) t0 *= p;
        units.emplace_back(p, ramified ? Int(r / p) : r);
    }
    std::vector<Congruence> system;
    Int modulus = 1;
    for (const auto& [p, u] : units) {
        Int rest = t0;
        if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) rest /= p;
        if (p == 2) {
            system.push_back({mod(Int(u * rest), Int(8)), Int(8)});  // odd residues are self-inverse mod 8
            modulus *= 8;
        } else {
            const int want = legendre(u, p) * legendre(rest, p);
            Int r = 1;
            while (legendre(r, p) != want) ++r;
            system.push_back({r, p});
            modulus *= p;
        }
    }
    const Int R = crt(system).residue;
    if (R == 1 && common_value_ok(left, right, t0, bad)) return t0;
    Int q = R;
    for (unsigned long i = 0; i < opt.prime_scan_limit; ++i, q += modulus) {
        check_factor_budget();
        if (!is_prime(q)) continue;
        auto primes = bad;
        primes.push_back(q);
        if (common_value_ok(left, right, Int(t0 * q), primes)) return t0 * q;
    }
    for (unsigned long m = 1; m <= opt.fallback_limit; ++m) {
        for (const Int& t : {Int(m), Int(-Int(m))}) {
            auto primes = bad;
            for (const auto& p : factor(t).primes()) primes.push_back(p);
            if (common_value_ok(left, right, t, primes)) return t;
        }
    }
    throw InternalInconsistency("common_value: scan limits exhausted");
}

/// Splits the diagonal form as left + right, finds a common value t and
/// glues zeros of left + <-t> and right + <t>.
inline std::vector<Int> split_and_glue(const std::vector<Int>& coeffs, std::size_t left_size, const SolveOptions& opt) {
    const std::vector<Int> left(coeffs.begin(), coeffs.begin() + left_size);
    const std::vector<Int> right(coeffs.begin() + left_size, coeffs.end());
    const Int t = common_value(left, right, opt);
    const auto lres = solve_diagonal_int(with(left, Int(-t)), opt);
    const auto rres = solve_diagonal_int(with(right, t), opt);
    if (!std::holds_alternative<IsotropicVector>(lres) || !std::holds_alternative<IsotropicVector>(rres))
        throw InternalInconsistency("split_and_glue: a half with a valid common value is anisotropic");
    const auto& x = std::get<IsotropicVector>(lres).coords;
    const auto& y = std::get<IsotropicVector>(rres).coords;
    const Int& u = x.back();
    const Int& w = y.back();
    std::vector<Int> out(coeffs.size(), Int(0));
    if (u == 0) {
        for (std::size_t i = 0; i < left_size; ++i) out[i] = x[i];
    } else if (w == 0) {
        for (std::size_t i = left_size; i < coeffs.size(); ++i) out[i] = y[i - left_size];
    } else {
        for (std::size_t i = 0; i < left_size; ++i) out[i] = x[i] * w;
        for (std::size_t i = left_size; i < coeffs.size(); ++i) out[i] = y[i - left_size] * u;
    }
    return out;
}

inline SolveResult solve_diagonal_int(std::vector<Int> coeffs, const SolveOptions& opt);

/// Zero supported on a proper subform. Subsets are tried by size, then by
/// the product of their coefficients, and the first locally isotropic one
/// is solved. Zeros of small subforms are far smaller than those obtained
/// by gluing across all coefficients, which keeps later factoring cheap.
inline std::optional<std::vector<Int>> solve_small_subform(const std::vector<Int>& coeffs, const SolveOptions& opt) {
    const std::size_t n = coeffs.size();
    for (std::size_t m = 3; m < n; ++m) {
        std::vector<std::pair<Int, std::vector<std::size_t>>> subsets;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
            std::vector<std::size_t> idx;
            Int prod = 1;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) idx.push_back(i), prod *= abs_int(coeffs[i]);
            subsets.emplace_back(prod, idx);
        }
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [prod, idx] : subsets) {
            std::vector<Int> sub;
            for (auto i : idx) sub.push_back(coeffs[i]);
            if (find_witness(sub)) continue;
            const auto res = solve_diagonal_int(sub, opt);
            const auto& y = std::get<IsotropicVector>(res).coords;
            std::vector<Int> out(n, Int(0));
            for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] = y[j];
            return out;
        }
    }
    return std::nullopt;
}

inline SolveResult solve_diagonal_int(std::vector<Int> coeffs, const SolveOptions& opt) {
    const std::size_t n = coeffs.size();
    if (n < 2 || n > 6) throw UnsupportedDimension("solve: dimension " + std::to_string(n) + " outside 2..6");
    for (std::size_t i = 0; i < n; ++i)
        if (coeffs[i] == 0) {
            std::vector<Int> e(n, Int(0));
            e[i] = 1;
            return IsotropicVector{e};
        }
    // Squarefree normalization: c = s f^2, c x^2 = s (f x)^2.
    std::vector<Int> scale(n);
    Int content = 0;
    const auto splits = squarefree_split_all(coeffs);
    for (std::size_t i = 0; i < n; ++i) {
        coeffs[i] = splits[i].squarefree;
        scale[i] = splits[i].cofactor;
        content = gcd(content, coeffs[i]);
    }
    for (auto& c : coeffs) c /= content;
    auto back = [&](const std::vector<Int>& X) {
        std::vector<Rat> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = Rat(X[i]) / Rat(scale[i]);
        return IsotropicVector{primitive(x)};
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coeffs[i] == -coeffs[j]) {
                std::vector<Int> e(n, Int(0));
                e[i] = 1, e[j] = 1;
                return back(e);
            }
    if (auto w = find_witness(coeffs)) return *w;

    std::vector<Int> X;
    if (n >= 4) {
        if (auto sub = solve_small_subform(coeffs, opt)) {
            if (eval_diag(coeffs, *sub) != 0) throw InternalInconsistency("solve: subform zero failed verification");
            return back(*sub);
        }
    }
    if (n == 3) {
        const auto lt = minimize_ternary({Rat(coeffs[0]), Rat(coeffs[1]), Rat(coeffs[2])});
        const auto res = solve_ternary(lt);
        if (!std::holds_alternative<IsotropicVector>(res))
            throw InternalInconsistency("solve: locally isotropic ternary has no zero");
        const auto& y = std::get<IsotropicVector>(res).coords;
        std::vector<Rat> x(3);
        for (std::size_t i = 0; i < 3; ++i) x[i] = Rat(y[i]) / lt.var_scale[i];
        X = primitive(x);
    } else {
        X = split_and_glue(coeffs, n == 4 ? 2 : 3, opt);
    }
    if (eval_diag(coeffs, X) != 0) throw InternalInconsistency("solve: diagonal zero failed verification");
    return back(X);
}

}  // namespace detail

/// Zero of a nondegenerate-or-not diagonal form with rational coefficients.
inline SolveResult solve_diagonal(const std::vector<Rat>& coeffs, const SolveOptions& opt = {}) {
    std::vector<Int> ints;
    for (const auto& c : coeffs) ints.push_back(c.get_num() * c.get_den());  // x = d X
    auto res = detail::solve_diagonal_int(ints, opt);
    if (auto* v = std::get_if<IsotropicVector>(&res)) {
        std::vector<Rat> x(coeffs.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = Rat(v->coords[i]) * Rat(coeffs[i].get_den());
        v->coords = detail::primitive(x);
        if (evaluate(QuadForm::diagonal(coeffs), v->coords) != 0)
            throw InternalInconsistency("solve_diagonal: verification failed");
    }
    return res;
}

namespace detail {

inline SolveResult solve_by_diagonalizing(const QuadForm& q, const SolveOptions& opt) {
    const std::size_t n = q.dim();
    const auto diag = diagonalize(q);
    for (std::size_t i = 0; i < n; ++i)
        if (diag.coeffs[i] == 0) return IsotropicVector{primitive(diag.transform.column(i))};
    auto res = solve_diagonal(diag.coeffs, opt);
    if (std::holds_alternative<AnisotropyWitness>(res)) return res;
    const auto& y = std::get<IsotropicVector>(res).coords;
    return IsotropicVector{primitive(diag.transform * to_rat(y))};
}

/// Gram matrix of q scaled by the lcm of its denominators.
inline Matrix<Int> integral_gram(const QuadForm& q) {
    const std::size_t n = q.dim();
    Int den = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) den = lcm(den, q.gram()(i, j).get_den());
    Matrix<Int> G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = Int(q.gram()(i, j) * Rat(den));
    return G;
}

/// q scaled to an integral form and minimized at every prime whose square
/// divides the determinant.
inline std::optional<MinimizedForm> minimized(const QuadForm& q) {
    const Matrix<Int> G = integral_gram(q);
    const Int det = det_int(G);
    if (det == 0) return std::nullopt;
    std::vector<Int> primes;
    for (const auto& pe : factor(det).factors)
        if (pe.exponent >= 2) primes.push_back(pe.prime);
    return minimize_form(G, primes);
}

/// Same contract as solve, after minimizing and reducing the lattice.
inline std::optional<SolveResult> solve_reduced(const QuadForm& q, const SolveOptions& opt) {
    const std::size_t n = q.dim();
    const auto M = minimized(q);
    if (!M) return std::nullopt;
    const auto R = indefinite_lll(M->gram);
    Matrix<Rat> Tr(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Tr(i, j) = Rat(R.transform(i, j));
    const Matrix<Rat> basis = M->basis * Tr;
    if (R.zero) return IsotropicVector{primitive(M->basis * *R.zero)};
    Matrix<Rat> H(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(i, j) = Rat(R.gram(i, j));
    auto res = solve_by_diagonalizing(QuadForm(H), opt);
    if (std::holds_alternative<AnisotropyWitness>(res)) return res;
    return IsotropicVector{primitive(basis * to_rat(std::get<IsotropicVector>(res).coords))};
}

/// Basis of the integer span of the given vectors, by row echelon
/// reduction with gcd steps.
inline std::vector<std::vector<Int>> span_basis(std::vector<std::vector<Int>> rows, std::size_t m) {
    std::size_t top = 0;
    for (std::size_t c = 0; c < m && top < rows.size(); ++c) {
        for (;;) {
            std::optional<std::size_t> piv;
            for (std::size_t r = top; r < rows.size(); ++r)
                if (rows[r][c] != 0 && (!piv || abs_int(rows[r][c]) < abs_int(rows[*piv][c]))) piv = r;
            if (!piv) break;
            std::swap(rows[top], rows[*piv]);
            bool done = true;
            for (std::size_t r = top + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                const Int f = Int(rows[r][c] / rows[top][c]);
                for (std::size_t j = 0; j < m; ++j) rows[r][j] -= f * rows[top][j];
                if (rows[r][c] != 0) done = false;
            }
            if (done) {
                ++top;
                break;
            }
        }
    }
    rows.resize(top);
    return rows;
}

/// Primitive zero of a unimodular indefinite integral form g. Reduction
/// either meets a zero or leaves a first vector of value +-1, which splits
/// off; two split vectors of opposite sign add up to a zero.
inline std::optional<std::vector<Int>> unimodular_zero(const Matrix<Int>& g) {
    const std::size_t n = g.rows();
    auto form = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        Int s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += x[i] * g(i, j) * y[j];
        return s;
    };
    std::vector<std::vector<Int>> basis;
    for (std::size_t i = 0; i < n; ++i) {
        basis.emplace_back(n, Int(0));
        basis.back()[i] = 1;
    }
    std::optional<std::vector<Int>> pos, neg;
    while (!basis.empty()) {
        const std::size_t m = basis.size();
        Matrix<Int> h(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) h(i, j) = form(basis[i], basis[j]);
        auto lift = [&](const std::vector<Int>& c) {
            std::vector<Int> x(n, Int(0));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < n; ++k) x[k] += c[i] * basis[i][k];
            return x;
        };
        const auto R = indefinite_lll(h);
        if (R.zero) return lift(primitive(*R.zero));
        std::vector<Int> c(m);
        for (std::size_t i = 0; i < m; ++i) c[i] = R.transform(i, 0);
        const auto e = lift(c);
        const Int v = form(e, e);
        if (v == 1 && !pos) pos = e;
        else if (v == -1 && !neg) neg = e;
        else if (v != 1 && v != -1) return std::nullopt;
        if (pos && neg) {
            std::vector<Int> x(n);
            for (std::size_t k = 0; k < n; ++k) x[k] = (*pos)[k] + (*neg)[k];
            return x;
        }
        std::vector<std::vector<Int>> rest;
        for (const auto& b : basis) {
            const Int f = v * form(b, e);
            std::vector<Int> w(n);
            for (std::size_t k = 0; k < n; ++k) w[k] = b[k] - f * e[k];
            rest.push_back(std::move(w));
        }
        basis = span_basis(std::move(rest), n);
        if (basis.size() != m - 1) throw InternalInconsistency("unimodular_zero: complement has wrong rank");
    }
    return std::nullopt;
}

/// Pairwise orthogonal isotropic vectors of the unimodular integral form
/// G, found by splitting off one hyperbolic plane per reduced zero.
inline std::vector<std::vector<Int>> isotropic_sublattice(const Matrix<Int>& G) {
    const std::size_t n = G.rows();
    auto form = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        Int s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += x[i] * G(i, j) * y[j];
        return s;
    };
    std::vector<std::vector<Int>> out;
    std::vector<std::vector<Int>> basis;  // current sublattice, ambient coordinates
    for (std::size_t i = 0; i < n; ++i) {
        basis.emplace_back(n, Int(0));
        basis.back()[i] = 1;
    }
    while (basis.size() >= 2) {
        const std::size_t m = basis.size();
        Matrix<Int> g(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) g(i, j) = form(basis[i], basis[j]);
        const Int det = det_int(g);
        if (det != 1 && det != -1) break;
        const auto found = unimodular_zero(g);
        if (!found) break;
        const auto& z = *found;
        std::vector<Int> x(n, Int(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < n; ++c) x[c] += z[i] * basis[i][c];
        // g z is primitive because g is unimodular, so some integral
        // combination y of the basis has B(x, y) = 1.
        std::vector<Int> gx(m, Int(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) gx[i] += g(i, j) * z[j];
        std::vector<Int> coef(m, Int(0));
        Int acc = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (gx[i] == 0) continue;
            if (acc == 0) {
                acc = gx[i];
                coef[i] = 1;
                continue;
            }
            Int gg, s, t;
            mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), acc.get_mpz_t(), gx[i].get_mpz_t());
            for (auto& c : coef) c *= s;
            coef[i] = t;
            acc = gg;
        }
        if (abs_int(acc) != 1) throw InternalInconsistency("isotropic_sublattice: form is not unimodular");
        std::vector<Int> y(n, Int(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < n; ++c) y[c] += coef[i] * acc * basis[i][c];
        out.push_back(x);
        // Project every basis vector onto the orthogonal complement of the
        // unimodular plane spanned by x and y.
        const Int cyy = form(y, y);
        std::vector<std::vector<Int>> rest;
        for (const auto& v : basis) {
            const Int bx = form(v, x), by = form(v, y);
            const Int a = by - cyy * bx, b = bx;
            std::vector<Int> w(n);
            for (std::size_t c = 0; c < n; ++c) w[c] = v[c] - a * x[c] - b * y[c];
            rest.push_back(std::move(w));
        }
        basis = span_basis(std::move(rest), n);
        if (basis.size() != m - 2) throw InternalInconsistency("isotropic_sublattice: complement has wrong rank");
    }
    return out;
}

/// Rational basis, in the coordinates of q, of a totally isotropic
/// subspace. Empty when q does not minimize to a unimodular form.
inline std::vector<std::vector<Rat>> isotropic_subspace(const QuadForm& q) {
    const auto M = minimized(q);
    if (!M) return {};
    const auto iso = isotropic_sublattice(M->gram);
    std::vector<std::vector<Rat>> out;
    for (const auto& x : iso) out.push_back(to_rat(primitive(M->basis * to_rat(x))));
    return out;
}

}  // namespace detail

/// Isotropic vector of q (primitive, first nonzero entry positive) or a
/// local obstruction for an equivalent diagonal form.
inline SolveResult solve(const QuadForm& q, const SolveOptions& opt = {}) {
    const std::size_t n = q.dim();
    if (n > 6) throw UnsupportedDimension("solve: dimension " + std::to_string(n) + " exceeds 6");
    if (n < 2) throw UnsupportedDimension("solve: dimension " + std::to_string(n) + " below 2");
    std::optional<SolveResult> res;
    if (opt.reduce && n >= 3) res = detail::solve_reduced(q, opt);
    if (!res) res = detail::solve_by_diagonalizing(q, opt);
    if (const auto* v = std::get_if<IsotropicVector>(&*res))
        if (evaluate(q, v->coords) != 0) throw InternalInconsistency("solve: returned vector is not isotropic");
    return *res;
}

}  // namespace quatsplit
