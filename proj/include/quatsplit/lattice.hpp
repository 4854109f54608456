#pragma once

// Exact LLL reduction with rational Gram-Schmidt data. Dimensions here never
// exceed 6, so the orthogonalization is simply recomputed after each swap.

#include <optional>
#include <vector>

#include "quatsplit/exact_arith.hpp"
#include "quatsplit/matrix.hpp"

namespace quatsplit {

/// Rows of `basis` are the lattice generators. `gram` is the ambient inner
/// product (standard dot product when absent).
struct IntLattice {
    Matrix<Int> basis;
    std::optional<Matrix<Int>> gram;
};

struct LllResult {
    IntLattice lattice;
    Matrix<Int> transform;  // unimodular, reduced rows = transform * input rows
};

namespace detail {

inline Int inner(const IntLattice& L, std::size_t i, std::size_t j) {
    const auto& B = L.basis;
    Int s = 0;
    if (!L.gram) {
        for (std::size_t k = 0; k < B.cols(); ++k) s += B(i, k) * B(j, k);
        return s;
    }
    const auto& G = *L.gram;
    for (std::size_t a = 0; a < B.cols(); ++a) {
        if (B(i, a) == 0) continue;
        Int row = 0;
        for (std::size_t b = 0; b < B.cols(); ++b) row += G(a, b) * B(j, b);
        s += B(i, a) * row;
    }
    return s;
}

struct GramSchmidt {
    Matrix<Rat> mu;
    std::vector<Rat> norms;  // squared lengths of the orthogonalized vectors
};

inline GramSchmidt gram_schmidt(const IntLattice& L) {
    const std::size_t n = L.basis.rows();
    GramSchmidt gs{Matrix<Rat>(n, n), std::vector<Rat>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rat r = inner(L, i, j);
            for (std::size_t k = 0; k < j; ++k) r -= gs.mu(j, k) * gs.mu(i, k) * gs.norms[k];
            gs.mu(i, j) = r / gs.norms[j];
        }
        Rat b = inner(L, i, i);
        for (std::size_t k = 0; k < i; ++k) b -= gs.mu(i, k) * gs.mu(i, k) * gs.norms[k];
        if (b == 0) throw DependentBasis("lll_reduce: basis vectors are linearly dependent");
        if (b < 0) throw InvalidArgument("lll_reduce: Gram matrix is not positive definite");
        gs.norms[i] = b;
        gs.mu(i, i) = 1;
    }
    return gs;
}

/// Nearest integer, halves rounded toward +infinity.
inline Int round_nearest(const Rat& q) {
    Rat shifted = q + Rat(1, 2);
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return f;
}

inline void row_axpy(Matrix<Int>& m, std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(dst, c) -= k * m(src, c);
}

inline void row_swap(Matrix<Int>& m, std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace detail

inline bool is_lll_reduced(const IntLattice& L, const Rat& delta = Rat(3, 4)) {
    const auto gs = detail::gram_schmidt(L);
    const std::size_t n = L.basis.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(gs.mu(i, j)) > Rat(1, 2)) return false;
    for (std::size_t k = 1; k < n; ++k) {
        const Rat& m = gs.mu(k, k - 1);
        if (gs.norms[k] < (delta - m * m) * gs.norms[k - 1]) return false;
    }
    return true;
}

inline LllResult lll_reduce(const IntLattice& input, const Rat& delta = Rat(3, 4)) {
    if (delta <= Rat(1, 4) || delta > 1) throw InvalidArgument("lll_reduce: delta must lie in (1/4, 1]");
    IntLattice L = input;
    const std::size_t n = L.basis.rows();
    if (L.gram && (L.gram->rows() != L.basis.cols() || L.gram->cols() != L.basis.cols()))
        throw DimensionMismatch("lll_reduce: Gram matrix does not match the ambient dimension");
    Matrix<Int> U = Matrix<Int>::identity(n);
    auto gs = detail::gram_schmidt(L);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            const Int q = detail::round_nearest(gs.mu(k, jj));
            if (q == 0) continue;
            detail::row_axpy(L.basis, k, jj, q);
            detail::row_axpy(U, k, jj, q);
            for (std::size_t i = 0; i <= jj; ++i) gs.mu(k, i) -= Rat(q) * gs.mu(jj, i);
        }
        const Rat& m = gs.mu(k, k - 1);
        if (gs.norms[k] >= (delta - m * m) * gs.norms[k - 1]) {
            ++k;
        } else {
            detail::row_swap(L.basis, k, k - 1);
            detail::row_swap(U, k, k - 1);
            gs = detail::gram_schmidt(L);
            k = k > 1 ? k - 1 : 1;
        }
    }
    return {std::move(L), std::move(U)};
}

}  // namespace quatsplit
