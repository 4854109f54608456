#pragma once

// Quaternion algebras H_K(alpha, beta) in the basis 1, u, v, uv with
// u^2 = alpha, v^2 = beta, uv = -vu.

#include <array>
#include <optional>
#include <variant>

#include "quatsplit/algebra.hpp"
#include "quatsplit/quadform.hpp"

namespace quatsplit {

struct QuatAlgebra {
    std::optional<QuadField> base;
    QFElem alpha, beta;

    QuatAlgebra(std::optional<QuadField> k, QFElem a, QFElem b) : base(std::move(k)), alpha(std::move(a)), beta(std::move(b)) {
        if (alpha == 0 || beta == 0) throw InvalidArgument("quaternion algebra parameters must be nonzero");
    }
    static QuatAlgebra rational(const Rat& a, const Rat& b) { return QuatAlgebra(std::nullopt, QFElem(a), QFElem(b)); }
    bool over_rationals() const { return !base; }
};

struct Quaternion {
    std::array<QFElem, 4> x{};  // coefficients of 1, u, v, uv
    friend bool operator==(const Quaternion& p, const Quaternion& q) { return p.x == q.x; }
};

inline Quaternion mul(const QuatAlgebra& H, const Quaternion& p, const Quaternion& q) {
    const QFElem& a = H.alpha;
    const QFElem& b = H.beta;
    const auto& x = p.x;
    const auto& y = q.x;
    return {{x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
             x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
             x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
             x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]}};
}

inline Quaternion conj(const Quaternion& p) { return {{p.x[0], -p.x[1], -p.x[2], -p.x[3]}}; }

inline QFElem trace(const Quaternion& p) { return QFElem(2) * p.x[0]; }

inline QFElem norm(const QuatAlgebra& H, const Quaternion& p) {
    const auto& x = p.x;
    return x[0] * x[0] - H.alpha * x[1] * x[1] - H.beta * x[2] * x[2] + H.alpha * H.beta * x[3] * x[3];
}

/// Structure constants of H in the basis 1, u, v, uv.
inline SCAlgebra structure_constants(const QuatAlgebra& H) {
    SCAlgebra A{H.base, {}, {QFElem(1), QFElem(0), QFElem(0), QFElem(0)}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Quaternion p, q;
            p.x[i] = 1;
            q.x[j] = 1;
            const auto r = mul(H, p, q);
            for (std::size_t k = 0; k < 4; ++k) A.gamma[i][j][k] = r.x[k];
        }
    return A;
}

namespace detail {

inline Quaternion integral_quaternion(const std::vector<Int>& v) {
    return {{QFElem(v[0]), QFElem(v[1]), QFElem(v[2]), QFElem(v[3])}};
}

inline void require_rational(const QuatAlgebra& H) {
    if (!H.over_rationals() || !H.alpha.is_rational() || !H.beta.is_rational())
        throw InvalidArgument("operation requires a quaternion algebra over Q");
}

}  // namespace detail

/// A nonzero s with N(s) = 0 (primitive integer coordinates, positive
/// leading entry), or a local obstruction certifying a division algebra.
inline std::variant<Quaternion, AnisotropyWitness> split_rational(const QuatAlgebra& H) {
    detail::require_rational(H);
    // alpha x^2 + beta y^2 - z^2 = 0 gives s = z + x u + y v.
    const auto res = solve_diagonal({H.alpha.a(), H.beta.a(), Rat(-1)});
    if (const auto* w = std::get_if<AnisotropyWitness>(&res)) return *w;
    const auto& v = std::get<IsotropicVector>(res).coords;
    const auto s = detail::integral_quaternion(detail::primitive(std::vector<Int>{v[2], v[0], v[1], Int(0)}));
    if (!(norm(H, s) == 0)) throw InternalInconsistency("split_rational: norm of result is nonzero");
    return s;
}

struct SqrtEmbedding {
    Quaternion s;                // trace zero, s^2 = d
    std::vector<Int> isotropic;  // primitive zero of a x1^2 + b x2^2 - ab x3^2 - d x4^2
};
struct ZeroDivisorInstead {
    Quaternion s;  // x1 u + x2 v + x3 uv of norm zero
};
struct NotSplitByField {
    AnisotropyWitness witness;
};

using EmbedResult = std::variant<SqrtEmbedding, ZeroDivisorInstead, NotSplitByField>;

/// Trace-zero s in H with s^2 = d, from an isotropic vector of
/// a x1^2 + b x2^2 - ab x3^2 - d x4^2.
inline EmbedResult embed_sqrt(const QuatAlgebra& H, const Int& d) {
    detail::require_rational(H);
    if (!is_squarefree(d) || d == 1) throw InvalidArgument("embed_sqrt: d must be squarefree and not a square");
    const Rat& a = H.alpha.a();
    const Rat& b = H.beta.a();
    const auto res = solve_diagonal({a, b, Rat(-a * b), Rat(-d)});
    if (const auto* w = std::get_if<AnisotropyWitness>(&res)) return NotSplitByField{*w};
    const auto& v = std::get<IsotropicVector>(res).coords;
    if (v[3] == 0) {
        const auto z = detail::primitive(std::vector<Int>{Int(0), v[0], v[1], v[2]});
        const auto s = detail::integral_quaternion(z);
        if (!(norm(H, s) == 0)) throw InternalInconsistency("embed_sqrt: norm of the x4 = 0 element is nonzero");
        return ZeroDivisorInstead{s};
    }
    const Rat x4(v[3]);
    const Quaternion s{{QFElem(0), QFElem(Rat(v[0] / x4)), QFElem(Rat(v[1] / x4)), QFElem(Rat(v[2] / x4))}};
    if (!(mul(H, s, s) == Quaternion{{QFElem(d), QFElem(0), QFElem(0), QFElem(0)}}))
        throw InternalInconsistency("embed_sqrt: square of result differs from d");
    return SqrtEmbedding{s, v};
}

}  // namespace quatsplit
