#pragma once

// Four-dimensional algebras over Q or Q(sqrt d) given by structure
// constants: a_i a_j = sum_k gamma[i][j][k] a_k.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <variant>

#include "quatsplit/matrix.hpp"
#include "quatsplit/quadfield.hpp"

namespace quatsplit {

using AlgElem = std::array<QFElem, 4>;
using Gamma = std::array<std::array<std::array<QFElem, 4>, 4>, 4>;

struct SCAlgebra {
    std::optional<QuadField> base;  // nullopt: the rationals
    Gamma gamma{};
    AlgElem one{};
};

inline AlgElem basis_vector(std::size_t i) {
    AlgElem e{};
    e[i] = 1;
    return e;
}

inline AlgElem operator+(const AlgElem& x, const AlgElem& y) {
    AlgElem r;
    for (std::size_t i = 0; i < 4; ++i) r[i] = x[i] + y[i];
    return r;
}
inline AlgElem operator-(const AlgElem& x, const AlgElem& y) {
    AlgElem r;
    for (std::size_t i = 0; i < 4; ++i) r[i] = x[i] - y[i];
    return r;
}
inline AlgElem operator*(const QFElem& c, const AlgElem& x) {
    AlgElem r;
    for (std::size_t i = 0; i < 4; ++i) r[i] = c * x[i];
    return r;
}
inline bool is_zero(const AlgElem& x) {
    for (const auto& c : x)
        if (!(c == 0)) return false;
    return true;
}

inline AlgElem multiply(const SCAlgebra& A, const AlgElem& x, const AlgElem& y) {
    AlgElem r{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            const QFElem c = x[i] * y[j];
            for (std::size_t k = 0; k < 4; ++k)
                if (!(A.gamma[i][j][k] == 0)) r[k] += c * A.gamma[i][j][k];
        }
    }
    return r;
}

inline AlgElem scalar(const SCAlgebra& A, const QFElem& c) { return c * A.one; }

/// Row i holds the coordinates of x * a_i, the layout of the printed
/// quaternion tables. Acting on row vectors, this composes in reverse:
/// regular_rep(xy) = regular_rep(y) * regular_rep(x).
inline Matrix<QFElem> regular_rep(const SCAlgebra& A, const AlgElem& x) {
    Matrix<QFElem> m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        const AlgElem p = multiply(A, x, basis_vector(i));
        for (std::size_t k = 0; k < 4; ++k) m(i, k) = p[k];
    }
    return m;
}

/// Matrix of y -> x y on column coordinate vectors; a unital homomorphism.
inline Matrix<QFElem> left_mult_matrix(const SCAlgebra& A, const AlgElem& x) {
    return regular_rep(A, x).transpose();
}

inline QFElem reduced_trace(const SCAlgebra& A, const AlgElem& x) {
    const auto m = regular_rep(A, x);
    QFElem t = 0;
    for (std::size_t i = 0; i < 4; ++i) t += m(i, i);
    return t / QFElem(2);
}

/// c with x = c * 1, if x is a scalar.
inline std::optional<QFElem> as_scalar(const SCAlgebra& A, const AlgElem& x) {
    std::size_t piv = 4;
    for (std::size_t i = 0; i < 4 && piv == 4; ++i)
        if (!(A.one[i] == 0)) piv = i;
    if (piv == 4) return std::nullopt;
    const QFElem c = x[piv] / A.one[piv];
    for (std::size_t i = 0; i < 4; ++i)
        if (!(x[i] == c * A.one[i])) return std::nullopt;
    return c;
}

struct ValidationReport {
    bool ok = true;
    std::string defect;
};

inline ValidationReport validate(const SCAlgebra& A) {
    const long d = A.base ? A.base->d() : 0;
    for (const auto& plane : A.gamma)
        for (const auto& row : plane)
            for (const auto& c : row)
                if (!c.is_rational() && c.d() != d) return {false, "structure constant outside the base field"};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k) {
                const auto ei = basis_vector(i), ej = basis_vector(j), ek = basis_vector(k);
                if (multiply(A, multiply(A, ei, ej), ek) != multiply(A, ei, multiply(A, ej, ek)))
                    return {false, "associativity fails on basis triple (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + "," + std::to_string(k + 1) + ")"};
            }
    if (is_zero(A.one)) return {false, "no identity"};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto e = basis_vector(i);
        if (multiply(A, A.one, e) != e || multiply(A, e, A.one) != e) return {false, "no identity"};
    }
    return {};
}

/// Structure constants of the same algebra in the basis b_j = sum_i g(i,j) a_i.
inline SCAlgebra change_basis(const SCAlgebra& A, const Matrix<QFElem>& g) {
    const auto ginv = inverse(g);
    if (!ginv) throw DependentBasis("change_basis: matrix is singular");
    std::array<AlgElem, 4> b;
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) b[j][i] = g(i, j);
    auto to_new = [&](const AlgElem& x) {
        AlgElem r{};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t k = 0; k < 4; ++k) r[i] += (*ginv)(i, k) * x[k];
        return r;
    };
    SCAlgebra out{A.base, {}, to_new(A.one)};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out.gamma[i][j] = to_new(multiply(A, b[i], b[j]));
    return out;
}

/// M_2(K) on the basis E11, E12, E21, E22.
inline SCAlgebra matrix_algebra(const std::optional<QuadField>& base) {
    SCAlgebra A{base, {}, {QFElem(1), QFElem(0), QFElem(0), QFElem(1)}};
    // E_ab E_cd = [b == c] E_ad, with index 2a+b.
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t a = i / 2, b = i % 2, c = j / 2, d = j % 2;
            if (b == c) A.gamma[i][j][2 * a + d] = 1;
        }
    return A;
}

struct QuatBasis {
    AlgElem u, v;
    QFElem alpha, beta;
    Matrix<QFElem> change_of_basis;  // columns: 1, u, v, uv in original coordinates
};

struct EarlyZeroDivisor {
    AlgElem element;
};

namespace detail {

inline std::vector<AlgElem> basis_candidates() {
    std::vector<AlgElem> out;
    for (std::size_t i = 1; i < 4; ++i) out.push_back(basis_vector(i));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) out.push_back(basis_vector(i) + basis_vector(j));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k)
                out.push_back(basis_vector(i) + basis_vector(j) + basis_vector(k));
    return out;
}

/// Basis of {y : u y + y u = 0, trace(y) = 0}.
inline std::vector<AlgElem> anticommutant(const SCAlgebra& A, const AlgElem& u) {
    Matrix<QFElem> m(5, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        const auto e = basis_vector(j);
        const auto c = multiply(A, u, e) + multiply(A, e, u);
        for (std::size_t r = 0; r < 4; ++r) m(r, j) = c[r];
        m(4, j) = reduced_trace(A, e);
    }
    std::vector<AlgElem> out;
    for (const auto& v : nullspace(m)) out.push_back({v[0], v[1], v[2], v[3]});
    return out;
}

}  // namespace detail

namespace detail {

/// Rational c with c^2 x integral in each component and free of square
/// content, so that scaling an element by c keeps its square small.
inline Rat square_normalizer(const QFElem& x) {
    const Int den = lcm(x.a().get_den(), x.b().get_den());
    const Int content = gcd(Int(x.a().get_num() * (den / x.a().get_den())),
                            Int(x.b().get_num() * (den / x.b().get_den())));
    // c = den / f with content * den = s f^2 (s squarefree).
    const auto split = squarefree_split(Int(content * den));
    return make_rat(den, split.cofactor);
}

/// A y with u y + y u = 0 and y^2 a nonzero scalar, or a nonzero nilpotent
/// of that kind. Candidates are the commutators u g - g u for g among the
/// preferred elements and the basis, and their pairwise sums. These span
/// the anticommutant of a non-central trace-zero u, and their squares stay
/// as small as the structure constants allow, unlike a raw nullspace vector
/// whose scaling is arbitrary. The result is rescaled by a rational so that
/// y^2 is integral without square content.
inline std::variant<std::pair<AlgElem, QFElem>, AlgElem> anticommuting_element(
    const SCAlgebra& A, const AlgElem& u, const std::vector<AlgElem>& preferred = {},
    const std::vector<Int>& known = {}) {
    if (anticommutant(A, u).size() != 2) throw NotQuaternion("anticommutant is not 2-dimensional");
    std::vector<AlgElem> gens = preferred;
    for (std::size_t j = 0; j < 4; ++j) gens.push_back(basis_vector(j));
    std::vector<AlgElem> comms;
    for (const auto& e : gens) {
        const AlgElem c = multiply(A, u, e) - multiply(A, e, u);
        if (!is_zero(c)) comms.push_back(c);
    }
    if (comms.empty()) throw NotQuaternion("element is central");
    std::vector<AlgElem> tries = comms;
    for (std::size_t i = 0; i < comms.size(); ++i)
        for (std::size_t j = i + 1; j < comms.size(); ++j) tries.push_back(comms[i] + comms[j]);
    // Candidates are ordered by the size of the norm of the normalized
    // square, since later steps factor that norm, and the first whose norm
    // factors quickly wins.
    std::vector<std::pair<std::size_t, std::pair<AlgElem, QFElem>>> ranked;
    for (const auto& y : tries) {
        if (is_zero(y)) continue;
        const auto sq = as_scalar(A, multiply(A, y, y));
        if (!sq) throw NotQuaternion("anticommuting element with non-scalar square");
        if (*sq == 0) continue;
        const Rat c = square_normalizer(*sq);
        std::pair<AlgElem, QFElem> cand{QFElem(c) * y, QFElem(Rat(c * c)) * *sq};
        const Rat n = cand.second.norm();
        ranked.emplace_back(mpz_sizeinbase(n.get_num_mpz_t(), 2) + mpz_sizeinbase(n.get_den_mpz_t(), 2),
                            std::move(cand));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& r : ranked)
        if (factors_quickly(r.second.second.norm(), known)) return r.second;
    std::optional<std::pair<AlgElem, QFElem>> best;
    if (!ranked.empty()) best = ranked.front().second;
    if (best) return *best;
    return comms[0];
}

}  // namespace detail

namespace detail {

inline QuatBasis assemble_basis(const SCAlgebra& A, AlgElem u, QFElem alpha, AlgElem v, QFElem beta) {
    const Rat cu = square_normalizer(alpha);
    u = QFElem(cu) * u;
    alpha *= QFElem(Rat(cu * cu));
    const AlgElem uv = multiply(A, u, v);
    Matrix<QFElem> cob(4, 4);
    const std::array<AlgElem, 4> cols{A.one, u, v, uv};
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 4; ++r) cob(r, c) = cols[c][r];
    if (rank(cob) != 4) throw NotQuaternion("quaternion_basis: 1, u, v, uv are dependent");
    if (multiply(A, v, u) != QFElem(-1) * uv)
        throw InternalInconsistency("quaternion_basis: u and v do not anticommute");
    if (as_scalar(A, multiply(A, u, u)) != alpha || as_scalar(A, multiply(A, v, v)) != beta)
        throw InternalInconsistency("quaternion_basis: rescaled squares do not match");
    return QuatBasis{u, v, alpha, beta, cob};
}

/// Trace-zero parts of the scan candidates with their squares, in scan
/// order, or the first nilpotent among them.
inline std::variant<std::vector<std::pair<AlgElem, QFElem>>, EarlyZeroDivisor> traceless_candidates(
    const SCAlgebra& A, bool first_only) {
    std::vector<std::pair<AlgElem, QFElem>> out;
    for (const auto& x : basis_candidates()) {
        const AlgElem x0 = x - scalar(A, reduced_trace(A, x) / QFElem(2));
        if (is_zero(x0)) continue;
        const auto sq = as_scalar(A, multiply(A, x0, x0));
        if (!sq) throw NotQuaternion("quaternion_basis: trace-zero element with non-scalar square");
        if (*sq == 0) return EarlyZeroDivisor{x0};
        out.emplace_back(x0, *sq);
        if (first_only) break;
    }
    if (out.empty()) throw NotQuaternion("quaternion_basis: every candidate is central");
    return out;
}

}  // namespace detail

/// Quaternion basis 1, u, v, uv found by a fixed scan of candidates, or a
/// nilpotent met on the way. v is the first of the two basis vectors of
/// the anticommutant of u and their sum with nonzero square. u and v are then rescaled by
/// rationals so that alpha and beta have integral, square-content-free
/// components.
inline std::variant<QuatBasis, EarlyZeroDivisor> quaternion_basis(const SCAlgebra& A) {
    const auto cands = detail::traceless_candidates(A, true);
    if (const auto* e = std::get_if<EarlyZeroDivisor>(&cands)) return *e;
    const auto& [u, alpha] = std::get<0>(cands).front();
    const auto anti = detail::anticommutant(A, u);
    if (anti.size() != 2) throw NotQuaternion("quaternion_basis: anticommutant is not 2-dimensional");
    for (const auto& y : {anti[0], anti[1], anti[0] + anti[1]}) {
        const auto sq = as_scalar(A, multiply(A, y, y));
        if (!sq) throw NotQuaternion("quaternion_basis: anticommuting element with non-scalar square");
        if (*sq == 0) continue;
        const Rat c = detail::square_normalizer(*sq);
        return detail::assemble_basis(A, u, alpha, QFElem(c) * y, QFElem(Rat(c * c)) * *sq);
    }
    return EarlyZeroDivisor{anti.front()};
}

/// Like quaternion_basis, but u and v are chosen among all candidates so
/// that the norms of alpha and beta are small and factor quickly, with a
/// rational alpha preferred. Any nilpotent candidate is returned instead.
inline std::variant<QuatBasis, EarlyZeroDivisor> factorable_quaternion_basis(const SCAlgebra& A) {
    const auto cands = detail::traceless_candidates(A, false);
    if (const auto* e = std::get_if<EarlyZeroDivisor>(&cands)) return *e;
    std::vector<std::pair<std::size_t, std::pair<AlgElem, QFElem>>> ranked;
    for (const auto& [x0, sq] : std::get<0>(cands)) {
        const Rat c = detail::square_normalizer(sq);
        const QFElem a = QFElem(Rat(c * c)) * sq;
        const Rat n = a.norm();
        ranked.push_back({mpz_sizeinbase(n.get_num_mpz_t(), 2) + mpz_sizeinbase(n.get_den_mpz_t(), 2), {x0, sq}});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const auto* pick = &ranked.front().second;
    // A rational square already answers the first pipeline step.
    const auto rational = std::find_if(ranked.begin(), ranked.end(),
                                       [](const auto& r) { return r.second.second.is_rational(); });
    if (rational != ranked.end()) {
        pick = &rational->second;
    } else {
        for (const auto& r : ranked) {
            const Rat c = detail::square_normalizer(r.second.second);
            if (factors_quickly((QFElem(Rat(c * c)) * r.second.second).norm())) {
                pick = &r.second;
                break;
            }
        }
    }
    const auto& [u, alpha] = *pick;
    const auto anti = detail::anticommuting_element(A, u, {}, primes_of({alpha.norm()}));
    if (const auto* nil = std::get_if<AlgElem>(&anti)) return EarlyZeroDivisor{*nil};
    const auto& [v, beta] = std::get<std::pair<AlgElem, QFElem>>(anti);
    return detail::assemble_basis(A, u, alpha, v, beta);
}

}  // namespace quatsplit
