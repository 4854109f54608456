#include <gtest/gtest.h>

#include <random>

#include "quatsplit/pipeline.hpp"

using namespace quatsplit;

namespace {

Matrix<QFElem> random_invertible(std::mt19937& rng, const QuadField& k) {
    std::uniform_int_distribution<long> num(-20, 20), den(1, 20);
    Matrix<QFElem> g(4, 4);
    do {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                g(i, j) = QFElem(make_rat(Int(num(rng)), Int(den(rng))), make_rat(Int(num(rng)), Int(den(rng))), k);
    } while (determinant(g) == 0);
    return g;
}

SCAlgebra quaternions(const QuadField& k, const QFElem& a, const QFElem& b) {
    return structure_constants(QuatAlgebra(k, a, b));
}

bool is_zero_divisor(const SCAlgebra& A, const AlgElem& x) {
    return !is_zero(x) && determinant(regular_rep(A, x)) == 0;
}

void expect_step1(const SCAlgebra& A, const SquareElement& l) {
    EXPECT_FALSE(is_zero(l.l));
    EXPECT_EQ(reduced_trace(A, l.l), QFElem(0));
    EXPECT_EQ(multiply(A, l.l, l.l), scalar(A, QFElem(l.square)));
}

void expect_anticommuting(const SCAlgebra& A, const SquareElement& l, const SquareElement& lp) {
    EXPECT_FALSE(is_zero(lp.l));
    EXPECT_TRUE(is_zero(multiply(A, l.l, lp.l) + multiply(A, lp.l, l.l)));
    EXPECT_EQ(multiply(A, lp.l, lp.l), scalar(A, QFElem(lp.square)));
}

void expect_result(const SCAlgebra& A, const std::variant<PipelineResult, NotSplitCertificate>& r) {
    ASSERT_TRUE(std::holds_alternative<PipelineResult>(r));
    const auto& res = std::get<PipelineResult>(r);
    EXPECT_TRUE(is_zero_divisor(A, res.zero_divisor));
    if (res.isomorphism) {
        EXPECT_TRUE(verify_isomorphism(A, *res.isomorphism));
    }
}

}  // namespace

TEST(Pipeline, SixVariableDeterminantIdentity) {
    std::mt19937 rng(2);
    std::uniform_int_distribution<long> num(-100, 100), den(1, 100);
    for (long d : {-11L, -3L, 2L, 101L}) {
        for (int t = 0; t < 20; ++t) {
            const Rat r1 = make_rat(Int(num(rng)), Int(den(rng))), t1 = make_rat(Int(num(rng)), Int(den(rng)));
            const Rat r2 = make_rat(Int(num(rng)), Int(den(rng))), t2 = make_rat(Int(num(rng)), Int(den(rng)));
            const SquareFormData data(r1, t1, r2, t2, Int(d));
            const Rat n1 = t1 * t1 * d - r1 * r1, n2 = t2 * t2 * d - r2 * r2;
            const Rat R = r1 * t2 + t1 * r2, P = r1 * r2 + t1 * t2 * d;
            EXPECT_EQ(n1 * n2, -(R * R * d - P * P));
            EXPECT_EQ(determinant(data.form.gram()), -(n1 * n1 * n2 * n2));
        }
    }
}

TEST(Pipeline, Step1SpecialCases) {
    {
        const QuadField k(Int(3));
        const SCAlgebra A = quaternions(k, QFElem(2), QFElem::sqrt_d(k));
        const auto s = step1_traceless_rational_square(A);
        ASSERT_TRUE(std::holds_alternative<SquareElement>(s));
        expect_step1(A, std::get<SquareElement>(s));
        // l is whichever extracted generator has a rational square, rescaled so its square is squarefree.
        const auto qb = factorable_quaternion_basis(A);
        ASSERT_TRUE(std::holds_alternative<QuatBasis>(qb));
        const auto& B = std::get<QuatBasis>(qb);
        ASSERT_TRUE(B.alpha.is_rational() || B.beta.is_rational());
        const AlgElem& w = B.alpha.is_rational() ? B.u : B.v;
        const auto& l = std::get<SquareElement>(s).l;
        std::size_t i = 1;
        while (w[i] == 0) ++i;
        const QFElem ratio = l[i] / w[i];
        EXPECT_TRUE(ratio.is_rational());
        EXPECT_EQ(l, ratio * w);
        EXPECT_EQ(std::get<SquareElement>(s).square, Rat(2));
    }
    {
        const QuadField k(Int(2));
        const SCAlgebra A = quaternions(k, QFElem::sqrt_d(k), QFElem::sqrt_d(k));
        const auto s = step1_traceless_rational_square(A);
        ASSERT_TRUE(std::holds_alternative<SquareElement>(s));
        expect_step1(A, std::get<SquareElement>(s));
        EXPECT_EQ(std::get<SquareElement>(s).l, basis_vector(3));
        EXPECT_EQ(std::get<SquareElement>(s).square, Rat(-2));
    }
}

TEST(Pipeline, Step1GenericCase) {
    const QuadField k(Int(3));
    const SCAlgebra A = quaternions(k, QFElem(Rat(1), Rat(1), k), QFElem::sqrt_d(k));
    const auto s = step1_traceless_rational_square(A);
    ASSERT_TRUE(std::holds_alternative<SquareElement>(s));
    expect_step1(A, std::get<SquareElement>(s));
}

TEST(Pipeline, Step2RationalSquareIsReturnedDirectly) {
    // In H(2, 3) over Q(sqrt 5) every basis square is rational already.
    const QuadField k(Int(5));
    const SCAlgebra A = quaternions(k, QFElem(2), QFElem(3));
    const SquareElement l{basis_vector(1), Rat(2)};
    const auto s = step2_anticommutant(A, l.l, l.square);
    ASSERT_TRUE(std::holds_alternative<SquareElement>(s));
    expect_anticommuting(A, l, std::get<SquareElement>(s));
}

TEST(Pipeline, Step2OnConjugatedMatrixAlgebra) {
    std::mt19937 rng(31);
    const QuadField k(Int(5));
    int checked = 0;
    for (int t = 0; t < 4; ++t) {
        const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
        const auto s1 = step1_traceless_rational_square(A);
        if (!std::holds_alternative<SquareElement>(s1)) continue;
        const auto& l = std::get<SquareElement>(s1);
        expect_step1(A, l);
        const auto s2 = step2_anticommutant(A, l.l, l.square);
        ASSERT_FALSE(std::holds_alternative<NotSplitCertificate>(s2));
        if (const auto* lp = std::get_if<SquareElement>(&s2)) {
            expect_anticommuting(A, l, *lp);
            const auto S = build_rational_subalgebra(A, l, *lp);
            EXPECT_EQ(S.H.alpha, QFElem(l.square));
            EXPECT_EQ(S.H.beta, QFElem(lp->square));
            ++checked;
        } else {
            EXPECT_TRUE(is_zero_divisor(A, std::get<EarlyZeroDivisor>(s2).element));
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Pipeline, Step2CertifiesDivisionAlgebra) {
    // The conjugate embedding of sqrt 5 makes -2 - sqrt 5 positive, so the
    // algebra is split at both real places; the obstruction sits at 2.
    const QuadField k(Int(5));
    const SCAlgebra A = quaternions(k, QFElem(-1), QFElem(Rat(-2), Rat(-1), k));
    const SquareElement l{basis_vector(1), Rat(-1)};
    const auto s = step2_anticommutant(A, l.l, l.square);
    ASSERT_TRUE(std::holds_alternative<NotSplitCertificate>(s));
    const auto& c = std::get<NotSplitCertificate>(s);
    EXPECT_EQ(c.stage, 2);
    EXPECT_TRUE(verify_witness(c.witness));
}

TEST(Pipeline, RationalSubalgebraRejectsDependentInput) {
    const QuadField k(Int(5));
    const SCAlgebra A = quaternions(k, QFElem(2), QFElem(3));
    const SquareElement l{basis_vector(1), Rat(2)};
    EXPECT_THROW(build_rational_subalgebra(A, l, l), IndependenceFailure);
}

TEST(Pipeline, FinishWithSplitSubalgebra) {
    const QuadField k(Int(-3));
    const SCAlgebra A = quaternions(k, QFElem(1), QFElem(7));
    const auto S = build_rational_subalgebra(A, {basis_vector(1), Rat(1)}, {basis_vector(2), Rat(7)});
    const auto r = finish(A, S);
    expect_result(A, r);
    EXPECT_EQ(std::get<PipelineResult>(r).branch, Branch::RationalSubalgebraSplit);
}

TEST(Pipeline, FinishEmbedsSquareRoot) {
    // H(-1, -1) is split by Q(sqrt -2); s = u + v squares to -2.
    const QuadField k(Int(-2));
    const SCAlgebra A = quaternions(k, QFElem(-1), QFElem(-1));
    const auto S = build_rational_subalgebra(A, {basis_vector(1), Rat(-1)}, {basis_vector(2), Rat(-1)});
    const auto r = finish(A, S);
    expect_result(A, r);
    const auto& res = std::get<PipelineResult>(r);
    EXPECT_EQ(res.branch, Branch::SqrtEmbedding);
    // The zero divisor is a multiple of s - sqrt(-2) with s trace-zero in the
    // rational span, s^2 = -2.
    const QFElem c = -res.zero_divisor[0] / QFElem::sqrt_d(k);
    ASSERT_FALSE(c == 0);
    AlgElem s = res.zero_divisor;
    s[0] = QFElem(0);
    s = c.inverse() * s;
    EXPECT_EQ(multiply(A, s, s), scalar(A, QFElem(-2)));
    for (const auto& x : s) EXPECT_TRUE(x.is_rational());
}

TEST(Pipeline, FinishCertifiesWhenFieldDoesNotSplit) {
    // Q(sqrt -7) does not split H(-1, -1): 2 splits in it.
    const QuadField k(Int(-7));
    const SCAlgebra A = quaternions(k, QFElem(-1), QFElem(-1));
    const auto S = build_rational_subalgebra(A, {basis_vector(1), Rat(-1)}, {basis_vector(2), Rat(-1)});
    const auto r = finish(A, S);
    ASSERT_TRUE(std::holds_alternative<NotSplitCertificate>(r));
    EXPECT_EQ(std::get<NotSplitCertificate>(r).stage, 4);
    EXPECT_EQ(std::get<NotSplitCertificate>(r).witness.place, Place::prime(Int(2)));
    EXPECT_TRUE(verify_witness(std::get<NotSplitCertificate>(r).witness));
}

TEST(Pipeline, ZeroDivisorOnNaturalMatrixAlgebra) {
    const QuadField k(Int(5));
    const SCAlgebra A = matrix_algebra(k);
    const auto r = zero_divisor(A);
    expect_result(A, r);
    EXPECT_EQ(std::get<PipelineResult>(r).branch, Branch::EarlyNilpotent);
}

TEST(Pipeline, ZeroDivisorOnConjugatedMatrixAlgebra) {
    std::mt19937 rng(12);
    for (long d : {-3L, 5L, 13L}) {
        const QuadField k{Int(d)};
        for (int t = 0; t < 3; ++t) {
            const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
            const auto r = zero_divisor(A);
            expect_result(A, r);
            ASSERT_TRUE(std::get<PipelineResult>(r).isomorphism.has_value());
        }
    }
}

TEST(Pipeline, ZeroDivisorIsCanonical) {
    std::mt19937 rng(40);
    const QuadField k(Int(2));
    const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
    const auto r = zero_divisor(A);
    expect_result(A, r);
    std::vector<Rat> flat;
    for (const auto& c : std::get<PipelineResult>(r).zero_divisor) flat.push_back(c.a()), flat.push_back(c.b());
    Int g = 0;
    for (const auto& x : flat) {
        EXPECT_EQ(x.get_den(), 1);
        g = gcd(g, Int(x.get_num()));
    }
    EXPECT_EQ(g, 1);
    for (const auto& x : flat)
        if (x != 0) {
            EXPECT_GT(x, 0);
            break;
        }
    // Same input, same output.
    EXPECT_EQ(std::get<PipelineResult>(zero_divisor(A)).zero_divisor, std::get<PipelineResult>(r).zero_divisor);
}

TEST(Pipeline, ZeroDivisorCertifiesDivisionAlgebras) {
    // (-1, -1) over a real quadratic field is ramified at both real places.
    for (long d : {2L, 3L, 13L}) {
        const QuadField k{Int(d)};
        const auto r = zero_divisor(quaternions(k, QFElem(-1), QFElem(-1)));
        ASSERT_TRUE(std::holds_alternative<NotSplitCertificate>(r)) << d;
        EXPECT_TRUE(verify_witness(std::get<NotSplitCertificate>(r).witness));
    }
    // (2, 5) over Q(i): ramified at 5, which splits in Q(i).
    const QuadField gi(Int(-1));
    const auto r = zero_divisor(quaternions(gi, QFElem(2), QFElem(5)));
    ASSERT_TRUE(std::holds_alternative<NotSplitCertificate>(r));
    EXPECT_TRUE(verify_witness(std::get<NotSplitCertificate>(r).witness));
}

TEST(Pipeline, ZeroDivisorRejectsBadInput) {
    EXPECT_THROW(zero_divisor(matrix_algebra(std::nullopt)), InvalidArgument);
    SCAlgebra bad = matrix_algebra(QuadField(Int(5)));
    bad.gamma[1][2][0] = QFElem(2);
    EXPECT_THROW(zero_divisor(bad), InvalidArgument);
}

TEST(Pipeline, IsomorphismFromElementaryIdempotent) {
    const QuadField k(Int(-1));
    const SCAlgebra A = matrix_algebra(k);
    const auto phi = explicit_isomorphism(A, basis_vector(0));
    EXPECT_TRUE(verify_isomorphism(A, phi));
    EXPECT_EQ(image(phi, A.one), Matrix<QFElem>::identity(2));
}

TEST(Pipeline, IsomorphismIsMultiplicativeOnRandomPairs) {
    std::mt19937 rng(77);
    const QuadField k(Int(5));
    const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
    const auto r = zero_divisor(A);
    expect_result(A, r);
    const auto& phi = *std::get<PipelineResult>(r).isomorphism;
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    auto rnd = [&] {
        AlgElem x;
        for (auto& c : x) c = QFElem(make_rat(Int(num(rng)), Int(den(rng))), make_rat(Int(num(rng)), Int(den(rng))), k);
        return x;
    };
    for (int t = 0; t < 20; ++t) {
        const AlgElem x = rnd(), y = rnd();
        EXPECT_EQ(image(phi, x) * image(phi, y), image(phi, multiply(A, x, y)));
    }
}

TEST(Pipeline, IsomorphismRejectsUnit) {
    const SCAlgebra A = matrix_algebra(QuadField(Int(3)));
    EXPECT_THROW(explicit_isomorphism(A, A.one), BadIdealDimension);
}

TEST(Pipeline, ConicOverQuadraticField) {
    const QuadField k5(Int(5));
    const auto one = solve_conic_quadfield(QFElem(1), QFElem(3), k5);
    ASSERT_TRUE(std::holds_alternative<ConicSolution>(one));
    const auto& s1 = std::get<ConicSolution>(one);
    EXPECT_EQ(s1.x, QFElem(1));
    EXPECT_EQ(s1.y, QFElem(0));
    EXPECT_EQ(s1.z, QFElem(1));

    const QFElem a = QFElem::sqrt_d(k5), b(Rat(1), Rat(-1), k5);
    const auto r = solve_conic_quadfield(a, b, k5);
    ASSERT_TRUE(std::holds_alternative<ConicSolution>(r));
    const auto& s = std::get<ConicSolution>(r);
    EXPECT_EQ(a * s.x * s.x + b * s.y * s.y, s.z * s.z);
    EXPECT_FALSE(s.x == 0 && s.y == 0 && s.z == 0);

    const QuadField k2(Int(2));
    const auto n = solve_conic_quadfield(QFElem(-1), QFElem(-1), k2);
    ASSERT_TRUE(std::holds_alternative<NoSolution>(n));
    EXPECT_TRUE(verify_witness(std::get<NoSolution>(n).certificate.witness));

    EXPECT_THROW(solve_conic_quadfield(QFElem(0), QFElem(1), k2), InvalidArgument);
}
