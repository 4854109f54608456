#pragma once

// Lattice preprocessing for indefinite integral quadratic forms: p-adic
// minimization of the determinant followed by an LLL variant that uses the
// form itself in place of a positive definite norm. Both only change the
// lattice, never the rational form, so isotropic vectors found afterwards are
// isotropic for the input; they just tend to be far smaller.

#include <optional>
#include <vector>

#include "quatsplit/exact_arith.hpp"
#include "quatsplit/lattice.hpp"
#include "quatsplit/matrix.hpp"

namespace quatsplit {

struct MinimizedForm {
    Matrix<Int> gram;    // integral, proportional to basis^T G basis
    Matrix<Rat> basis;   // columns: new basis vectors in input coordinates
};

struct IndefiniteLll {
    Matrix<Int> gram;                      // reduced Gram matrix
    Matrix<Int> transform;                 // columns: reduced basis in input coordinates
    std::optional<std::vector<Rat>> zero;  // isotropic vector met during reduction
};

namespace detail {

inline Int mod_p(const Int& x, const Int& p) { return mod(x, p); }

/// Basis of the kernel of G mod p in reduced echelon form (pivot entries 1,
/// zero at the other pivots), entries in [0, p).
inline std::vector<std::vector<Int>> kernel_mod_p(const Matrix<Int>& G, const Int& p) {
    const std::size_t n = G.rows();
    Matrix<Int> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = mod_p(G(i, j), p);
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t sel = row;
        while (sel < n && m(sel, col) == 0) ++sel;
        if (sel == n) continue;
        for (std::size_t c = 0; c < n; ++c) std::swap(m(sel, c), m(row, c));
        const Int inv = inverse_mod(m(row, col), p);
        for (std::size_t c = 0; c < n; ++c) m(row, c) = mod_p(Int(m(row, c) * inv), p);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || m(r, col) == 0) continue;
            const Int f = m(r, col);
            for (std::size_t c = 0; c < n; ++c) m(r, c) = mod_p(Int(m(r, c) - f * m(row, c)), p);
        }
        pivots.push_back(col);
        ++row;
    }
    std::vector<std::vector<Int>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        std::vector<Int> v(n, Int(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = mod_p(Int(-m(r, free)), p);
        basis.push_back(v);
    }
    // Echelon form of the kernel itself, so its pivots complete to a unimodular basis.
    const std::size_t k = basis.size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < k; ++col) {
        std::size_t sel = r;
        while (sel < k && basis[sel][col] == 0) ++sel;
        if (sel == k) continue;
        std::swap(basis[sel], basis[r]);
        const Int inv = inverse_mod(basis[r][col], p);
        for (auto& x : basis[r]) x = mod_p(Int(x * inv), p);
        for (std::size_t o = 0; o < k; ++o) {
            if (o == r || basis[o][col] == 0) continue;
            const Int f = basis[o][col];
            for (std::size_t c = 0; c < n; ++c) basis[o][c] = mod_p(Int(basis[o][c] - f * basis[r][c]), p);
        }
        ++r;
    }
    return basis;
}

inline Int form_value_mod(const Matrix<Int>& F, const std::vector<Int>& c, const Int& p) {
    Int s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) s += c[i] * c[j] * F(i, j);
    return mod_p(s, p);
}

/// Nonzero c with c^T F c = 0 mod p, if one exists.
inline std::optional<std::vector<Int>> isotropic_mod_p(const Matrix<Int>& F, const Int& p) {
    const std::size_t k = F.rows();
    if (p == 2) {
        // Cross terms vanish mod 2 and c_i^2 = c_i, so the condition is linear.
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<Int> c(k, Int(0));
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1u << i)) c[i] = 1;
            if (form_value_mod(F, c, p) == 0) return c;
        }
        return std::nullopt;
    }
    // Orthogonal basis mod p.
    std::vector<std::vector<Int>> basis;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Int> e(k, Int(0));
        e[i] = 1;
        basis.push_back(e);
    }
    auto bil = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        Int s = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) s += x[i] * y[j] * F(i, j);
        return mod_p(s, p);
    };
    std::vector<std::vector<Int>> orth;
    std::vector<Int> vals;
    while (!basis.empty()) {
        std::size_t piv = basis.size();
        for (std::size_t i = 0; i < basis.size() && piv == basis.size(); ++i)
            if (bil(basis[i], basis[i]) != 0) piv = i;
        if (piv == basis.size()) {
            // Every remaining vector is isotropic.
            return basis.front();
        }
        const auto v = basis[piv];
        const Int qv = bil(v, v);
        const Int inv = inverse_mod(qv, p);
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(piv));
        for (auto& w : basis) {
            const Int f = mod_p(Int(bil(w, v) * inv), p);
            for (std::size_t i = 0; i < k; ++i) w[i] = mod_p(Int(w[i] - f * v[i]), p);
        }
        orth.push_back(v);
        vals.push_back(qv);
    }
    auto combine = [&](const std::vector<Int>& coef) {
        std::vector<Int> c(k, Int(0));
        for (std::size_t j = 0; j < orth.size(); ++j)
            for (std::size_t i = 0; i < k; ++i) c[i] = mod_p(Int(c[i] + coef[j] * orth[j][i]), p);
        return c;
    };
    if (k < 2) return std::nullopt;
    if (k == 2) {
        const Int r = mod_p(Int(-vals[1] * inverse_mod(vals[0], p)), p);
        if (legendre(r, p) != 1) return std::nullopt;
        return combine({sqrt_mod(r, p), Int(1)});
    }
    for (Int t = 0;; ++t) {
        // a0 x^2 + a1 + a2 t^2 = 0
        const Int rhs = mod_p(Int(-(vals[1] + vals[2] * t * t) * inverse_mod(vals[0], p)), p);
        std::vector<Int> coef(orth.size(), Int(0));
        coef[1] = 1;
        coef[2] = t;
        if (rhs == 0) return combine(coef);
        if (legendre(rhs, p) == 1) {
            coef[0] = sqrt_mod(rhs, p);
            return combine(coef);
        }
    }
}

inline Matrix<Int> congruence(const Matrix<Int>& G, const Matrix<Int>& U) { return U.transpose() * G * U; }

inline Int det_int(const Matrix<Int>& G) {
    Matrix<Rat> m(G.rows(), G.cols());
    for (std::size_t i = 0; i < G.rows(); ++i)
        for (std::size_t j = 0; j < G.cols(); ++j) m(i, j) = Rat(G(i, j));
    const Rat d = determinant(m);
    return d.get_num();
}

inline void divide_exact(Matrix<Int>& G, const Int& p) {
    for (std::size_t i = 0; i < G.rows(); ++i)
        for (std::size_t j = 0; j < G.cols(); ++j) G(i, j) /= p;
}

/// One reduction of v_p(det). Returns false when no step applies.
inline bool minimize_step(MinimizedForm& M, const Int& p) {
    const std::size_t n = M.gram.rows();
    const auto ker = kernel_mod_p(M.gram, p);
    const std::size_t k = ker.size();
    if (k == 0) return false;
    if (k == n) {
        divide_exact(M.gram, p);
        return true;
    }
    // Form on the kernel, divided by p.
    Matrix<Int> F(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Int s = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) s += ker[i][a] * M.gram(a, b) * ker[j][b];
            F(i, j) = s / p;
        }
    if (const auto c = isotropic_mod_p(F, p)) {
        std::vector<Int> x(n, Int(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t a = 0; a < n; ++a) x[a] = mod_p(Int(x[a] + (*c)[i] * ker[i][a]), p);
        std::size_t j = 0;
        while (x[j] == 0) ++j;
        const Int inv = inverse_mod(x[j], p);
        for (auto& e : x) e = mod_p(Int(e * inv), p);
        // Replace e_j by x / p: the lattice gains x / p, index p.
        Matrix<Rat> U = Matrix<Rat>::identity(n);
        for (std::size_t a = 0; a < n; ++a) U(a, j) = make_rat(x[a], p);
        Matrix<Rat> G(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) G(a, b) = Rat(M.gram(a, b));
        const Matrix<Rat> H = U.transpose() * G * U;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (H(a, b).get_den() != 1) throw InternalInconsistency("minimize: non-integral Gram entry");
                M.gram(a, b) = H(a, b).get_num();
            }
        M.basis = M.basis * U;
        return true;
    }
    if (2 * k > n) {
        // Keep the kernel, multiply a complement by p, divide the form by p.
        Matrix<Int> U(n, n);
        std::vector<bool> pivot(n, false);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t c = 0;
            while (ker[i][c] == 0) ++c;
            pivot[c] = true;
            for (std::size_t a = 0; a < n; ++a) U(a, i) = ker[i][a];
        }
        std::size_t col = k;
        for (std::size_t a = 0; a < n; ++a)
            if (!pivot[a]) U(a, col++) = p;
        Matrix<Int> H = congruence(M.gram, U);
        divide_exact(H, p);
        M.gram = H;
        Matrix<Rat> Ur(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) Ur(a, b) = Rat(U(a, b));
        M.basis = M.basis * Ur;
        return true;
    }
    return false;
}

}  // namespace detail

/// Lattice on which G (integral, nondegenerate) has |det| stripped of the
/// square parts at the given primes wherever a local step allows it.
inline MinimizedForm minimize_form(const Matrix<Int>& G, const std::vector<Int>& primes) {
    MinimizedForm M{G, Matrix<Rat>::identity(G.rows())};
    for (const auto& p : primes) {
        for (;;) {
            detail::check_factor_budget();
            const Int det = detail::det_int(M.gram);
            if (det == 0) throw InvalidArgument("minimize_form: degenerate form");
            if (valuation(det, p) < 2) break;
            if (!detail::minimize_step(M, p)) break;
        }
    }
    return M;
}

/// LLL on the basis of Z^n using the indefinite form G: Gram-Schmidt with
/// respect to G, size reduction, and the Lovasz test on absolute values.
/// Stops early if a Gram-Schmidt vector is isotropic.
inline IndefiniteLll indefinite_lll(const Matrix<Int>& G, const Rat& delta = Rat(3, 4)) {
    const std::size_t n = G.rows();
    Matrix<Int> T = Matrix<Int>::identity(n);
    Matrix<Int> gram = G;
    auto gso = [&](std::vector<Rat>& B, Matrix<Rat>& mu, std::vector<std::vector<Rat>>& star) -> std::optional<std::size_t> {
        B.assign(n, Rat(0));
        mu = Matrix<Rat>(n, n);
        star.assign(n, std::vector<Rat>(n, Rat(0)));
        // star vectors in coordinates of the current basis
        for (std::size_t i = 0; i < n; ++i) {
            star[i][i] = 1;
            for (std::size_t j = 0; j < i; ++j) {
                Rat s = 0;  // <b_i, b*_j>
                for (std::size_t c = 0; c < n; ++c) s += Rat(gram(i, c)) * star[j][c];
                mu(i, j) = s / B[j];
                for (std::size_t c = 0; c < n; ++c) star[i][c] -= mu(i, j) * star[j][c];
            }
            Rat q = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) q += star[i][a] * Rat(gram(a, b)) * star[i][b];
            B[i] = q;
            if (q == 0) return i;
        }
        return std::nullopt;
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        // b_dst -= f b_src
        for (std::size_t r = 0; r < n; ++r) T(r, dst) -= f * T(r, src);
        for (std::size_t c = 0; c < n; ++c) gram(dst, c) -= f * gram(src, c);
        for (std::size_t r = 0; r < n; ++r) gram(r, dst) -= f * gram(r, src);
    };
    auto swap_col = [&](std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < n; ++r) std::swap(T(r, a), T(r, b));
        for (std::size_t c = 0; c < n; ++c) std::swap(gram(a, c), gram(b, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(gram(r, a), gram(r, b));
    };
    auto isotropic_from = [&](const std::vector<Rat>& s) {
        std::vector<Rat> v(n, Rat(0));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) v[r] += Rat(T(r, c)) * s[c];
        return v;
    };
    std::vector<Rat> B;
    Matrix<Rat> mu;
    std::vector<std::vector<Rat>> star;
    std::size_t k = 1;
    for (std::size_t iter = 0; k < n && iter < 100000; ++iter) {
        detail::check_factor_budget();
        if (auto z = gso(B, mu, star)) return {gram, T, isotropic_from(star[*z])};
        for (std::size_t jj = k; jj-- > 0;) {
            const Int r = detail::round_nearest(mu(k, jj));
            if (r != 0) {
                add_col(k, jj, r);
                if (auto z = gso(B, mu, star)) return {gram, T, isotropic_from(star[*z])};
            }
        }
        const Rat lhs = abs(Rat(B[k] + mu(k, k - 1) * mu(k, k - 1) * B[k - 1]));
        if (lhs < delta * abs(B[k - 1])) {
            swap_col(k, k - 1);
            k = k > 1 ? k - 1 : 1;
        } else {
            ++k;
        }
    }
    if (auto z = gso(B, mu, star)) return {gram, T, isotropic_from(star[*z])};
    return {gram, T, std::nullopt};
}

}  // namespace quatsplit
