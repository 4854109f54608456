#include <gtest/gtest.h>

#include <random>

#include "quatsplit/quadfield.hpp"

using namespace quatsplit;

namespace {

QFElem qf(long a, long b, const QuadField& k) { return QFElem(Rat(a), Rat(b), k); }

QFElem random_elem(std::mt19937& rng, const QuadField& k) {
    std::uniform_int_distribution<long> num(-30, 30), den(1, 12);
    return QFElem(make_rat(Int(num(rng)), Int(den(rng))), make_rat(Int(num(rng)), Int(den(rng))), k);
}

}  // namespace

TEST(QuadField, RejectsBadRadicands) {
    EXPECT_THROW(QuadField(Int(0)), InvalidArgument);
    EXPECT_THROW(QuadField(Int(1)), InvalidArgument);
    EXPECT_THROW(QuadField(Int(12)), InvalidArgument);
    EXPECT_THROW(QuadField(Int(-4)), InvalidArgument);
    EXPECT_NO_THROW(QuadField(Int(-1)));
    EXPECT_NO_THROW(QuadField(Int(101)));
}

TEST(QuadField, Arithmetic) {
    const QuadField k2(Int(2)), k5(Int(5));
    EXPECT_EQ(qf(1, 1, k2) * qf(1, -1, k2), QFElem(-1));
    const QFElem x = qf(3, -7, k2);
    EXPECT_EQ(x + QFElem(0), x);
    EXPECT_EQ(QFElem::sqrt_d(k5).inverse(), QFElem(Rat(0), Rat(1, 5), k5));
    EXPECT_EQ(QFElem(1) / QFElem::sqrt_d(k5), QFElem(Rat(0), Rat(1, 5), k5));
    EXPECT_EQ(x - x, QFElem(0));
}

TEST(QuadField, ConjNormTrace) {
    const QuadField k5(Int(5)), km3(Int(-3));
    EXPECT_EQ(qf(3, 2, k5).conj(), qf(3, -2, k5));
    EXPECT_EQ(qf(7, 0, k5).norm(), Rat(49));
    EXPECT_EQ(qf(1, 1, km3).tr(), Rat(2));
    EXPECT_EQ(qf(1, 1, km3).norm(), Rat(4));
    EXPECT_TRUE(qf(4, 0, k5).is_rational());
    EXPECT_FALSE(qf(4, 1, k5).is_rational());
}

TEST(QuadField, Errors) {
    const QuadField k2(Int(2)), k3(Int(3));
    EXPECT_THROW(QFElem(0).inverse(), DivisionByZero);
    EXPECT_THROW(qf(1, 1, k2) / QFElem(0), DivisionByZero);
    EXPECT_THROW(qf(1, 1, k2) * qf(1, 1, k3), FieldMismatch);
    EXPECT_THROW(qf(1, 1, k2) + qf(0, 1, k3), FieldMismatch);
    // Rationals mix with any field.
    EXPECT_EQ(qf(1, 1, k2) * QFElem(2), qf(2, 2, k2));
}

TEST(QuadField, NormIsMultiplicativeAndInversesWork) {
    std::mt19937 rng(11);
    for (long d : {-11L, -7L, -3L, -2L, -1L, 2L, 3L, 5L, 13L, 101L}) {
        const QuadField k{Int(d)};
        for (int t = 0; t < 50; ++t) {
            const QFElem x = random_elem(rng, k), y = random_elem(rng, k);
            EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
            if (!(x == 0)) {
                EXPECT_EQ(x * x.inverse(), QFElem(1));
            }
            EXPECT_EQ((x + y).conj(), x.conj() + y.conj());
            EXPECT_EQ((x * y).conj(), x.conj() * y.conj());
        }
    }
}

TEST(QuadField, SquareRoots) {
    const QuadField k2(Int(2)), km1(Int(-1));
    const QFElem x = qf(3, 2, k2);  // (1 + sqrt 2)^2
    const auto r = sqrt_in_field(x, k2);
    ASSERT_TRUE(r);
    EXPECT_EQ(*r * *r, x);
    EXPECT_FALSE(sqrt_in_field(qf(1, 1, k2), k2));
    const auto m = sqrt_in_field(QFElem(-4), km1);
    ASSERT_TRUE(m);
    EXPECT_EQ(*m * *m, QFElem(-4));
    EXPECT_FALSE(sqrt_in_field(QFElem(3), k2));
    EXPECT_EQ(*sqrt_in_field(QFElem(Rat(9, 4)), k2), QFElem(Rat(3, 2)));
}

TEST(QuadField, Printing) {
    const QuadField k5(Int(5));
    EXPECT_EQ(qf(3, -2, k5).to_string(), "3-2*sqrt(5)");
    EXPECT_EQ(qf(0, 1, k5).to_string(), "1*sqrt(5)");
    EXPECT_EQ(QFElem(Rat(-1, 2)).to_string(), "-1/2");
}
