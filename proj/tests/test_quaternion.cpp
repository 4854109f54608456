#include <gtest/gtest.h>

#include <random>

#include "quatsplit/quaternion.hpp"

using namespace quatsplit;

namespace {

Quaternion q(long a, long b, long c, long d) { return {{QFElem(a), QFElem(b), QFElem(c), QFElem(d)}}; }

Quaternion random_quaternion(std::mt19937& rng, const std::optional<QuadField>& k) {
    std::uniform_int_distribution<long> num(-12, 12), den(1, 6);
    Quaternion x;
    for (auto& c : x.x) {
        const Rat a = make_rat(Int(num(rng)), Int(den(rng)));
        c = k ? QFElem(a, make_rat(Int(num(rng)), Int(den(rng))), *k) : QFElem(a);
    }
    return x;
}

Quaternion scalar_q(const QFElem& c) { return {{c, QFElem(0), QFElem(0), QFElem(0)}}; }

}  // namespace

TEST(Quaternion, NormExamples) {
    const auto H = QuatAlgebra::rational(Rat(-1), Rat(-1));
    EXPECT_EQ(norm(H, q(1, 0, 0, 0)), QFElem(1));
    EXPECT_EQ(norm(H, q(0, 1, 0, 0)), QFElem(1));  // -alpha
    EXPECT_EQ(norm(H, q(1, 1, 1, 1)), QFElem(4));
    const auto G = QuatAlgebra::rational(Rat(3), Rat(5));
    EXPECT_EQ(norm(G, q(0, 1, 0, 0)), QFElem(-3));
    EXPECT_EQ(trace(q(7, 1, 2, 3)), QFElem(14));
    EXPECT_EQ(conj(q(7, 1, 2, 3)), q(7, -1, -2, -3));
}

TEST(Quaternion, RejectsZeroParameters) {
    EXPECT_THROW(QuatAlgebra::rational(Rat(0), Rat(1)), InvalidArgument);
    EXPECT_THROW(QuatAlgebra::rational(Rat(2), Rat(0)), InvalidArgument);
}

TEST(Quaternion, NormIsMultiplicative) {
    std::mt19937 rng(21);
    const QuadField k(Int(5));
    const std::vector<QuatAlgebra> algebras = {QuatAlgebra::rational(Rat(-1), Rat(-1)),
                                               QuatAlgebra::rational(Rat(2, 3), Rat(-7)),
                                               QuatAlgebra(k, QFElem(Rat(1), Rat(1), k), QFElem(Rat(0), Rat(2), k))};
    for (const auto& H : algebras) {
        const auto base = H.base;
        for (int t = 0; t < 25; ++t) {
            const auto x = random_quaternion(rng, base), y = random_quaternion(rng, base);
            EXPECT_EQ(norm(H, mul(H, x, y)), norm(H, x) * norm(H, y));
            EXPECT_EQ(mul(H, x, conj(x)), scalar_q(norm(H, x)));
            EXPECT_EQ(trace(x), x.x[0] + conj(x).x[0]);
        }
    }
}

TEST(Quaternion, StructureConstantsMatchMultiplication) {
    std::mt19937 rng(4);
    const auto H = QuatAlgebra::rational(Rat(-2), Rat(5));
    const SCAlgebra A = structure_constants(H);
    ASSERT_TRUE(validate(A).ok);
    for (int t = 0; t < 10; ++t) {
        const auto x = random_quaternion(rng, std::nullopt), y = random_quaternion(rng, std::nullopt);
        EXPECT_EQ(multiply(A, x.x, y.x), mul(H, x, y).x);
    }
}

TEST(Quaternion, SplitRationalExamples) {
    const auto w = split_rational(QuatAlgebra::rational(Rat(-1), Rat(-1)));
    ASSERT_TRUE(std::holds_alternative<AnisotropyWitness>(w));
    EXPECT_EQ(std::get<AnisotropyWitness>(w).place, Place::prime(Int(2)));
    EXPECT_TRUE(verify_witness(std::get<AnisotropyWitness>(w)));

    const auto one = split_rational(QuatAlgebra::rational(Rat(1), Rat(6)));
    ASSERT_TRUE(std::holds_alternative<Quaternion>(one));
    EXPECT_EQ(std::get<Quaternion>(one), q(1, 1, 0, 0));

    const auto H27 = QuatAlgebra::rational(Rat(2), Rat(7));
    const auto s = split_rational(H27);
    ASSERT_TRUE(std::holds_alternative<Quaternion>(s));
    EXPECT_EQ(std::get<Quaternion>(s), q(3, 1, 1, 0));
}

TEST(Quaternion, SplitRationalAgreesWithHilbertSymbols) {
    for (long a = -12; a <= 12; ++a)
        for (long b = -12; b <= 12; ++b) {
            if (a == 0 || b == 0) continue;
            const auto H = QuatAlgebra::rational(Rat(a), Rat(b));
            bool split = hilbert(Rat(a), Rat(b), Place::infinity()) == 1;
            for (const auto& p : factor(Int(2 * a * b)).primes())
                split = split && hilbert(Rat(a), Rat(b), Place::prime(p)) == 1;
            const auto res = split_rational(H);
            if (const auto* s = std::get_if<Quaternion>(&res)) {
                EXPECT_TRUE(split) << a << "," << b;
                EXPECT_EQ(norm(H, *s), QFElem(0));
                EXPECT_NE(*s, q(0, 0, 0, 0));
                const SCAlgebra A = structure_constants(H);
                EXPECT_EQ(determinant(regular_rep(A, s->x)), QFElem(0));
            } else {
                EXPECT_FALSE(split) << a << "," << b;
                EXPECT_TRUE(verify_witness(std::get<AnisotropyWitness>(res)));
            }
        }
}

TEST(Quaternion, SplitRationalRequiresRationalBase) {
    const QuadField k(Int(2));
    EXPECT_THROW(split_rational(QuatAlgebra(k, QFElem(1), QFElem(2))), InvalidArgument);
}

TEST(Quaternion, EmbedSqrtExamples) {
    const auto H = QuatAlgebra::rational(Rat(-1), Rat(-1));
    const auto r1 = embed_sqrt(H, Int(-1));
    ASSERT_TRUE(std::holds_alternative<SqrtEmbedding>(r1));
    EXPECT_EQ(std::get<SqrtEmbedding>(r1).s, q(0, 1, 0, 0));

    const auto r2 = embed_sqrt(H, Int(-2));
    ASSERT_TRUE(std::holds_alternative<SqrtEmbedding>(r2));
    const auto& s2 = std::get<SqrtEmbedding>(r2).s;
    EXPECT_EQ(trace(s2), QFElem(0));
    EXPECT_EQ(mul(H, s2, s2), scalar_q(QFElem(-2)));

    const auto r7 = embed_sqrt(H, Int(-7));
    ASSERT_TRUE(std::holds_alternative<NotSplitByField>(r7));
    const auto& w = std::get<NotSplitByField>(r7).witness;
    EXPECT_EQ(w.place, Place::prime(Int(2)));
    EXPECT_TRUE(verify_witness(w));
}

TEST(Quaternion, EmbedSqrtThreeSquaresObstruction) {
    // In H(-1, -1) a trace-zero s with s^2 = -m means m x4^2 is a sum of
    // three rational squares, impossible exactly when m = 7 mod 8 (m
    // squarefree). The form is definite in x1..x3, so x4 = 0 never occurs.
    const auto H = QuatAlgebra::rational(Rat(-1), Rat(-1));
    for (long m = 1; m <= 40; ++m) {
        const Int d(-m);
        if (!is_squarefree(d)) continue;
        const auto r = embed_sqrt(H, d);
        if (m % 8 == 7) {
            ASSERT_TRUE(std::holds_alternative<NotSplitByField>(r)) << m;
            EXPECT_TRUE(verify_witness(std::get<NotSplitByField>(r).witness));
        } else {
            ASSERT_TRUE(std::holds_alternative<SqrtEmbedding>(r)) << m;
            const auto& s = std::get<SqrtEmbedding>(r).s;
            EXPECT_EQ(trace(s), QFElem(0));
            EXPECT_EQ(mul(H, s, s), scalar_q(QFElem(d)));
        }
    }
}

TEST(Quaternion, EmbedSqrtOnSplitAlgebraMayReturnZeroDivisor) {
    // In H(1, 1) the four-variable form x^2 + y^2 - z^2 - d w^2 has zeros
    // with w = 0, so both outcomes are admissible; each must verify.
    const auto H = QuatAlgebra::rational(Rat(1), Rat(1));
    for (long d : {-3L, -1L, 2L, 3L, 5L, 6L, 7L}) {
        const auto r = embed_sqrt(H, Int(d));
        if (const auto* z = std::get_if<ZeroDivisorInstead>(&r)) {
            EXPECT_EQ(z->s.x[0], QFElem(0));
            EXPECT_EQ(norm(H, z->s), QFElem(0));
            EXPECT_NE(z->s, q(0, 0, 0, 0));
        } else {
            ASSERT_TRUE(std::holds_alternative<SqrtEmbedding>(r)) << d;
            const auto& s = std::get<SqrtEmbedding>(r).s;
            EXPECT_EQ(mul(H, s, s), scalar_q(QFElem(d)));
        }
    }
}

TEST(Quaternion, EmbedSqrtRejectsBadRadicand) {
    const auto H = QuatAlgebra::rational(Rat(-1), Rat(-1));
    EXPECT_THROW(embed_sqrt(H, Int(12)), InvalidArgument);
    EXPECT_THROW(embed_sqrt(H, Int(1)), InvalidArgument);
}
