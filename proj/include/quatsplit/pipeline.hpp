#pragma once

// Zero divisors and explicit isomorphisms for algebras isomorphic to
// M_2(Q(sqrt d)) given by structure constants. The search reduces to
// isotropic vectors of rational forms in 6, 4 and 4 variables; a local
// obstruction met along the way certifies that the algebra is not split.

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "quatsplit/algebra.hpp"
#include "quatsplit/quadform.hpp"
#include "quatsplit/quaternion.hpp"

namespace quatsplit {

enum class Branch { EarlyNilpotent, RationalSubalgebraSplit, SqrtEmbedding, X4ZeroRemark };

inline std::string to_string(Branch b) {
    switch (b) {
        case Branch::EarlyNilpotent: return "early-nilpotent";
        case Branch::RationalSubalgebraSplit: return "rational-subalgebra-split";
        case Branch::SqrtEmbedding: return "sqrt-embedding";
        case Branch::X4ZeroRemark: return "x4-zero-remark";
    }
    return "unknown";
}

using Isomorphism = std::array<Matrix<QFElem>, 4>;

struct PipelineResult {
    AlgElem zero_divisor;
    Branch branch;
    std::optional<Isomorphism> isomorphism;
};

struct NotSplitCertificate {
    int stage;  // 2: anticommuting element, 4: final step
    AnisotropyWitness witness;
};

/// The six-variable form whose zeros give traceless l with rational square,
/// for w^2 = r1 + t1 sqrt d and w'^2 = r2 + t2 sqrt d.
struct SquareFormData {
    Rat r1, t1, r2, t2;
    Int d;
    QuadForm form;

    SquareFormData(Rat r1_, Rat t1_, Rat r2_, Rat t2_, Int d_)
        : r1(std::move(r1_)), t1(std::move(t1_)), r2(std::move(r2_)), t2(std::move(t2_)), d(std::move(d_)),
          form(build(r1, t1, r2, t2, Rat(d))) {}

    static QuadForm build(const Rat& r1, const Rat& t1, const Rat& r2, const Rat& t2, const Rat& d) {
        const Rat R = r1 * t2 + t1 * r2;
        const Rat P = r1 * r2 + t1 * t2 * d;
        Matrix<Rat> g(6, 6);
        g(0, 0) = t1, g(0, 1) = g(1, 0) = r1, g(1, 1) = t1 * d;
        g(2, 2) = t2, g(2, 3) = g(3, 2) = r2, g(3, 3) = t2 * d;
        g(4, 4) = -R, g(4, 5) = g(5, 4) = -P, g(5, 5) = -R * d;
        return QuadForm(g);
    }
};

/// The four-variable form for an element anticommuting with u (u^2 = a) with
/// rational square, where v^2 = b + c sqrt d, c != 0, f = b / c.
struct AnticommuteFormData {
    Rat a, b, c, f;
    Int d;
    QuadForm form;

    AnticommuteFormData(Rat a_, Rat b_, Rat c_, Int d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), f(b / c), d(std::move(d_)), form(build(a, f, Rat(d))) {}

    static QuadForm build(const Rat& a, const Rat& f, const Rat& d) {
        Matrix<Rat> g(4, 4);
        g(0, 0) = 1, g(0, 1) = g(1, 0) = f, g(1, 1) = d;
        g(2, 2) = -a, g(2, 3) = g(3, 2) = -a * f, g(3, 3) = -a * d;
        return QuadForm(g);
    }
    /// Diagonal coefficients after x = s1 + f s2, y = s2, z = s3 + f s4, w = s4.
    std::array<Rat, 4> diagonal() const {
        const Rat e = Rat(d) - f * f;
        return {Rat(1), e, Rat(-a), Rat(-a * e)};
    }
};

struct SquareElement {
    AlgElem l;
    Rat square;
};

struct RationalSubalgebra {
    QuatAlgebra H;
    std::array<AlgElem, 4> embedding;  // images of 1, u, v, uv
};

namespace detail {

inline const QuadField& field_of(const SCAlgebra& A) {
    if (!A.base) throw InvalidArgument("algebra must be defined over a quadratic field");
    return *A.base;
}

inline QFElem in_field(const Rat& a, const Rat& b, const QuadField& k) { return QFElem(a, b, k); }

/// Scalar square of x, required to be rational.
inline std::optional<Rat> rational_square(const SCAlgebra& A, const AlgElem& x) {
    const auto s = as_scalar(A, multiply(A, x, x));
    if (!s || !s->is_rational()) return std::nullopt;
    return s->a();
}

/// c l with (c l)^2 = c^2 a a squarefree integer.
inline SquareElement squarefree_rescaled(const AlgElem& l, const Rat& a) {
    const Int& m = a.get_den();
    const auto split = squarefree_split(Int(a.get_num() * m));
    const Rat c = make_rat(m, split.cofactor);
    return {QFElem(c) * l, Rat(split.squarefree)};
}

/// Every element of span(iso) has a rational square, given by a quadratic
/// form on the span. Picks an element with a small square: a nilpotent if
/// reduction meets one, otherwise the smallest value over small
/// combinations of the reduced basis.
template <class ToElement>
AlgElem small_square_element(const SCAlgebra& A, const std::vector<std::vector<Rat>>& iso, ToElement element,
                             const std::vector<Int>& known) {
    const std::size_t m = iso.size();
    auto combo = [&](const std::vector<Rat>& c) {
        std::vector<Rat> s(iso[0].size(), Rat(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < s.size(); ++j) s[j] += c[i] * iso[i][j];
        return s;
    };
    auto square = [&](const std::vector<Rat>& s) {
        const auto sq = rational_square(A, element(s));
        if (!sq) throw InternalInconsistency("step 1: isotropic element has an irrational square");
        return *sq;
    };
    std::vector<Rat> diag(m);
    Matrix<Rat> R(m, m);
    std::vector<std::vector<Rat>> unit(m, std::vector<Rat>(m, Rat(0)));
    for (std::size_t i = 0; i < m; ++i) unit[i][i] = 1;
    for (std::size_t i = 0; i < m; ++i) R(i, i) = square(combo(unit[i]));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            std::vector<Rat> c = unit[i];
            c[j] = 1;
            R(i, j) = R(j, i) = (square(combo(c)) - R(i, i) - R(j, j)) / Rat(2);
        }
    const auto red = indefinite_lll(integral_gram(QuadForm(R)));
    if (red.zero) return element(combo(*red.zero));
    std::vector<std::vector<Rat>> b(m, std::vector<Rat>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b[j][i] = Rat(red.transform(i, j));
    // Candidates by increasing |square|; the first whose square factors
    // quickly wins, since the next steps factor it.
    std::vector<std::pair<Rat, std::vector<Rat>>> ranked;
    std::vector<int> e(m, -2);
    for (;;) {
        std::vector<Rat> c(m, Rat(0));
        bool nonzero = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (e[i] != 0) nonzero = true;
            for (std::size_t j = 0; j < m; ++j) c[j] += Rat(e[i]) * b[i][j];
        }
        if (nonzero) ranked.emplace_back(abs(square(combo(c))), std::move(c));
        std::size_t i = 0;
        while (i < m && e[i] == 2) e[i++] = -2;
        if (i == m) break;
        ++e[i];
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::optional<std::vector<Rat>> best;
    for (const auto& r : ranked)
        if (r.first != 0 && factors_quickly(r.first, known)) {
            best = r.second;
            break;
        }
    if (!best) best = ranked.front().second;
    return element(combo(*best));
}

inline bool singular(const SCAlgebra& A, const AlgElem& x) { return determinant(regular_rep(A, x)) == 0; }

/// Clears denominators over all eight rational components, divides by the
/// content and makes the first nonzero component positive.
inline AlgElem canonical_zero_divisor(const AlgElem& x, const QuadField& k) {
    std::vector<Rat> flat;
    for (const auto& c : x) flat.push_back(c.a()), flat.push_back(c.b());
    const auto p = primitive(flat);
    AlgElem out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = QFElem(Rat(p[2 * i]), Rat(p[2 * i + 1]), k);
    return out;
}

inline PipelineResult finish_result(const SCAlgebra& A, const AlgElem& x, Branch branch) {
    const auto& k = field_of(A);
    const AlgElem z = canonical_zero_divisor(x, k);
    if (is_zero(z) || !singular(A, z))
        throw InternalInconsistency("zero divisor failed verification on branch " + to_string(branch));
    return {z, branch, std::nullopt};
}

}  // namespace detail

using Step1Outcome = std::variant<SquareElement, EarlyZeroDivisor>;

/// Traceless nonzero l with l^2 rational.
inline Step1Outcome step1_traceless_rational_square(const SCAlgebra& A, const SolveOptions& opt = {}) {
    const auto& k = detail::field_of(A);
    const auto qb = factorable_quaternion_basis(A);
    if (const auto* e = std::get_if<EarlyZeroDivisor>(&qb)) return *e;
    const auto& B = std::get<QuatBasis>(qb);
    const AlgElem& w = B.u;
    const AlgElem& w2 = B.v;
    const Rat r1 = B.alpha.a(), t1 = B.alpha.b(), r2 = B.beta.a(), t2 = B.beta.b();
    AlgElem l;
    if (t1 == 0) {
        l = w;
    } else if (t2 == 0) {
        l = w2;
    } else if (r1 * t2 + r2 * t1 == 0) {
        l = multiply(A, w, w2);
    } else {
        const SquareFormData data(r1, t1, r2, t2, k.radicand());
        // The determinant is -N(alpha)^2 N(beta)^2. Factoring the two norms
        // separately seeds the prime memory, so the lattice minimization in
        // solve never hands their product to rho.
        const auto known = primes_of({B.alpha.norm(), B.beta.norm(), Rat(k.radicand())});
        const AlgElem ww = multiply(A, w, w2);
        auto element = [&](const std::vector<Rat>& s) {
            return detail::in_field(s[0], s[1], k) * w + detail::in_field(s[2], s[3], k) * w2 +
                   detail::in_field(s[4], s[5], k) * ww;
        };
        const auto iso = detail::isotropic_subspace(data.form);
        if (!iso.empty()) {
            l = detail::small_square_element(A, iso, element, known);
        } else {
            SolveOptions reduced = opt;
            reduced.reduce = true;
            const auto res = solve(data.form, reduced);
            if (!std::holds_alternative<IsotropicVector>(res))
                throw InternalInconsistency("step 1: the six-variable form reported anisotropic");
            l = element(detail::to_rat(std::get<IsotropicVector>(res).coords));
        }
    }
    if (is_zero(l)) throw InternalInconsistency("step 1: produced the zero element");
    if (!(reduced_trace(A, l) == 0)) throw InternalInconsistency("step 1: element is not traceless");
    const auto sq = detail::rational_square(A, l);
    if (!sq) throw InternalInconsistency("step 1: square is not rational");
    if (*sq == 0) return EarlyZeroDivisor{l};
    return detail::squarefree_rescaled(l, *sq);
}

using Step2Outcome = std::variant<SquareElement, EarlyZeroDivisor, NotSplitCertificate>;

/// Nonzero l' with l l' + l' l = 0 and l'^2 rational.
inline Step2Outcome step2_anticommutant(const SCAlgebra& A, const AlgElem& l, const Rat& a,
                                        const SolveOptions& opt = {}) {
    const auto& k = detail::field_of(A);
    // Commutators with a quaternion basis give much smaller squares than
    // commutators with the presentation basis.
    std::vector<AlgElem> pref;
    const auto basis = factorable_quaternion_basis(A);
    std::vector<Int> known = primes_of({a, Rat(k.radicand())});
    if (const auto* qb = std::get_if<QuatBasis>(&basis)) {
        pref = {qb->u, qb->v, multiply(A, qb->u, qb->v)};
        const auto more = primes_of({qb->alpha.norm(), qb->beta.norm()});
        known.insert(known.end(), more.begin(), more.end());
    }
    const auto anti = detail::anticommuting_element(A, l, pref, known);
    if (const auto* nil = std::get_if<AlgElem>(&anti)) return EarlyZeroDivisor{*nil};
    const std::optional<AlgElem> v0 = std::get<std::pair<AlgElem, QFElem>>(anti).first;
    const QFElem v0sq = std::get<std::pair<AlgElem, QFElem>>(anti).second;
    AlgElem lp;
    if (v0sq.is_rational()) {
        lp = *v0;
    } else {
        // The form below is the norm form of H_Q(f^2 - d, a) written in the
        // coordinates s of l' = (s1 + s2 sqrt d) v0 + (s3 + s4 sqrt d) l v0,
        // so a zero needs no pull-back. Solving it on a minimized, reduced
        // lattice keeps l' and its square small.
        const AnticommuteFormData data(a, v0sq.a(), v0sq.b(), k.radicand());
        const auto more = primes_of({v0sq.norm()});
        known.insert(known.end(), more.begin(), more.end());
        const AlgElem lv0 = multiply(A, l, *v0);
        auto element = [&](const std::vector<Rat>& sv) {
            return detail::in_field(sv[0], sv[1], k) * *v0 + detail::in_field(sv[2], sv[3], k) * lv0;
        };
        const auto iso = detail::isotropic_subspace(data.form);
        if (!iso.empty()) {
            lp = detail::small_square_element(A, iso, element, known);
        } else {
            SolveOptions reduced = opt;
            reduced.reduce = true;
            const auto res = solve(data.form, reduced);
            if (const auto* w = std::get_if<AnisotropyWitness>(&res)) return NotSplitCertificate{2, *w};
            lp = element(detail::to_rat(std::get<IsotropicVector>(res).coords));
        }
    }
    if (is_zero(lp)) throw InternalInconsistency("step 2: produced the zero element");
    if (!is_zero(multiply(A, l, lp) + multiply(A, lp, l))) throw InternalInconsistency("step 2: no anticommutation");
    const auto sq = detail::rational_square(A, lp);
    if (!sq) throw InternalInconsistency("step 2: square is not rational");
    if (*sq == 0) return EarlyZeroDivisor{lp};
    return detail::squarefree_rescaled(lp, *sq);
}

/// The rational quaternion algebra spanned by 1, l, l', l l'.
inline RationalSubalgebra build_rational_subalgebra(const SCAlgebra& A, const SquareElement& l,
                                                     const SquareElement& lp) {
    const std::array<AlgElem, 4> emb{A.one, l.l, lp.l, multiply(A, l.l, lp.l)};
    Matrix<QFElem> m(4, 4);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 4; ++r) m(r, c) = emb[c][r];
    if (rank(m) != 4) throw IndependenceFailure("1, l, l', ll' are linearly dependent");
    return {QuatAlgebra::rational(l.square, lp.square), emb};
}

namespace detail {

inline AlgElem embed(const RationalSubalgebra& S, const Quaternion& q) {
    AlgElem r{};
    for (std::size_t i = 0; i < 4; ++i) r = r + q.x[i] * S.embedding[i];
    return r;
}

}  // namespace detail

/// Zero divisor from the rational subalgebra: one of its own when it is
/// split, otherwise s - sqrt(d) with s^2 = d.
inline std::variant<PipelineResult, NotSplitCertificate> finish(const SCAlgebra& A, const RationalSubalgebra& S) {
    const auto& k = detail::field_of(A);
    const auto split = split_rational(S.H);
    if (const auto* q = std::get_if<Quaternion>(&split))
        return detail::finish_result(A, detail::embed(S, *q), Branch::RationalSubalgebraSplit);
    const auto emb = embed_sqrt(S.H, k.radicand());
    if (const auto* e = std::get_if<SqrtEmbedding>(&emb)) {
        const AlgElem s = detail::embed(S, e->s);
        return detail::finish_result(A, s - scalar(A, QFElem::sqrt_d(k)), Branch::SqrtEmbedding);
    }
    if (const auto* z = std::get_if<ZeroDivisorInstead>(&emb))
        return detail::finish_result(A, detail::embed(S, z->s), Branch::X4ZeroRemark);
    return NotSplitCertificate{4, std::get<NotSplitByField>(emb).witness};
}

/// Left ideal A r on the first two independent vectors a_i r, and the
/// matrices of left multiplication by each basis element on it.
inline Isomorphism explicit_isomorphism(const SCAlgebra& A, const AlgElem& r) {
    std::vector<AlgElem> basis;
    Matrix<QFElem> span(4, 0);
    for (std::size_t i = 0; i < 4; ++i) {
        const AlgElem v = multiply(A, basis_vector(i), r);
        Matrix<QFElem> trial(4, basis.size() + 1);
        for (std::size_t c = 0; c < basis.size(); ++c)
            for (std::size_t k = 0; k < 4; ++k) trial(k, c) = basis[c][k];
        for (std::size_t k = 0; k < 4; ++k) trial(k, basis.size()) = v[k];
        if (rank(trial) == basis.size() + 1) {
            basis.push_back(v);
            span = trial;
        }
    }
    if (basis.size() != 2)
        throw BadIdealDimension("left ideal has dimension " + std::to_string(basis.size()) + ", expected 2");
    Isomorphism phi;
    for (std::size_t i = 0; i < 4; ++i) {
        Matrix<QFElem> m(2, 2);
        for (std::size_t j = 0; j < 2; ++j) {
            const AlgElem img = multiply(A, basis_vector(i), basis[j]);
            const auto c = solve_linear(span, std::vector<QFElem>(img.begin(), img.end()));
            if (!c) throw InternalInconsistency("left ideal is not closed under multiplication");
            m(0, j) = (*c)[0];
            m(1, j) = (*c)[1];
        }
        phi[i] = m;
    }
    return phi;
}

/// Image of an arbitrary element under an isomorphism given on the basis.
inline Matrix<QFElem> image(const Isomorphism& phi, const AlgElem& x) {
    Matrix<QFElem> m(2, 2);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) m(r, c) += x[i] * phi[i](r, c);
    return m;
}

inline bool verify_isomorphism(const SCAlgebra& A, const Isomorphism& phi) {
    if (!(image(phi, A.one) == Matrix<QFElem>::identity(2))) return false;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (!(phi[i] * phi[j] == image(phi, multiply(A, basis_vector(i), basis_vector(j))))) return false;
    return true;
}

struct PipelineOptions {
    bool emit_isomorphism = true;
    SolveOptions solve;
};

/// Zero divisor of A (assumed quaternion over Q(sqrt d)), or a certificate
/// that A is a division algebra.
inline std::variant<PipelineResult, NotSplitCertificate> zero_divisor(const SCAlgebra& A,
                                                                       const PipelineOptions& opt = {}) {
    detail::field_of(A);
    if (const auto report = validate(A); !report.ok) throw InvalidArgument("invalid algebra: " + report.defect);
    std::variant<PipelineResult, NotSplitCertificate> out;
    const auto s1 = step1_traceless_rational_square(A, opt.solve);
    if (const auto* e = std::get_if<EarlyZeroDivisor>(&s1)) {
        out = detail::finish_result(A, e->element, Branch::EarlyNilpotent);
    } else {
        const auto& l = std::get<SquareElement>(s1);
        const auto s2 = step2_anticommutant(A, l.l, l.square, opt.solve);
        if (const auto* e2 = std::get_if<EarlyZeroDivisor>(&s2)) {
            out = detail::finish_result(A, e2->element, Branch::EarlyNilpotent);
        } else if (const auto* c = std::get_if<NotSplitCertificate>(&s2)) {
            return *c;
        } else {
            out = finish(A, build_rational_subalgebra(A, l, std::get<SquareElement>(s2)));
        }
    }
    if (auto* res = std::get_if<PipelineResult>(&out); res && opt.emit_isomorphism) {
        res->isomorphism = explicit_isomorphism(A, res->zero_divisor);
        if (!verify_isomorphism(A, *res->isomorphism))
            throw InternalInconsistency("explicit isomorphism failed verification");
    }
    return out;
}

struct ConicSolution {
    QFElem x, y, z;  // alpha x^2 + beta y^2 = z^2, not all zero
};
struct NoSolution {
    NotSplitCertificate certificate;
};

/// Nontrivial solution of alpha x^2 + beta y^2 = z^2 over Q(sqrt d).
inline std::variant<ConicSolution, NoSolution> solve_conic_quadfield(const QFElem& alpha, const QFElem& beta,
                                                                     const QuadField& k,
                                                                     const PipelineOptions& opt = {}) {
    if (alpha == 0 || beta == 0) throw InvalidArgument("conic coefficients must be nonzero");
    if (const auto r = sqrt_in_field(alpha, k)) return ConicSolution{QFElem(1), QFElem(0), *r};
    if (const auto r = sqrt_in_field(beta, k)) return ConicSolution{QFElem(0), QFElem(1), *r};
    const QuatAlgebra H(k, alpha, beta);
    const SCAlgebra A = structure_constants(H);
    PipelineOptions inner = opt;
    inner.emit_isomorphism = false;
    const auto res = zero_divisor(A, inner);
    if (const auto* c = std::get_if<NotSplitCertificate>(&res)) return NoSolution{*c};
    const auto& x = std::get<PipelineResult>(res).zero_divisor;
    // x1^2 - alpha x2^2 = beta (x3^2 - alpha x4^2); multiply through by the
    // norm of x3 + x4 sqrt(alpha).
    const QFElem Z = x[0] * x[2] - alpha * x[1] * x[3];
    const QFElem X = x[1] * x[2] - x[0] * x[3];
    const QFElem Y = x[2] * x[2] - alpha * x[3] * x[3];
    if (!(alpha * X * X + beta * Y * Y == Z * Z) || Y == 0)
        throw InternalInconsistency("conic solution failed verification");
    return ConicSolution{X, Y, Z};
}

}  // namespace quatsplit
