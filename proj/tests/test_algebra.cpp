#include <gtest/gtest.h>

#include <random>

#include "quatsplit/algebra.hpp"
#include "quatsplit/quaternion.hpp"

using namespace quatsplit;

namespace {

Matrix<QFElem> mat(std::initializer_list<std::initializer_list<QFElem>> rows) {
    Matrix<QFElem> m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (const auto& x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

// The four printed left-multiplication tables of 1, u, v, uv.
std::array<Matrix<QFElem>, 4> printed_tables(const QFElem& a, const QFElem& b) {
    const QFElem z = 0, o = 1;
    return {mat({{o, z, z, z}, {z, o, z, z}, {z, z, o, z}, {z, z, z, o}}),
            mat({{z, o, z, z}, {a, z, z, z}, {z, z, z, o}, {z, z, a, z}}),
            mat({{z, z, o, z}, {z, z, z, -o}, {b, z, z, z}, {z, -b, z, z}}),
            mat({{z, z, z, o}, {z, z, -a, z}, {z, b, z, z}, {-a * b, z, z, z}})};
}

AlgElem random_elem(std::mt19937& rng, const std::optional<QuadField>& k) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    AlgElem x;
    for (auto& c : x) {
        const Rat a = make_rat(Int(num(rng)), Int(den(rng)));
        c = k ? QFElem(a, make_rat(Int(num(rng)), Int(den(rng))), *k) : QFElem(a);
    }
    return x;
}

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

void expect_basis_invariants(const SCAlgebra& A, const QuatBasis& B) {
    EXPECT_FALSE(B.alpha == 0);
    EXPECT_FALSE(B.beta == 0);
    EXPECT_EQ(as_scalar(A, multiply(A, B.u, B.u)), B.alpha);
    EXPECT_EQ(as_scalar(A, multiply(A, B.v, B.v)), B.beta);
    EXPECT_TRUE(is_zero(multiply(A, B.u, B.v) + multiply(A, B.v, B.u)));
    EXPECT_EQ(rank(B.change_of_basis), 4u);
}

}  // namespace

TEST(Algebra, PrintedTablesReproducedExactly) {
    const QuadField k(Int(5));
    const std::vector<std::pair<QFElem, QFElem>> params = {
        {QFElem(-1), QFElem(-1)},
        {QFElem(Rat(2, 3)), QFElem(-7)},
        {QFElem(Rat(1), Rat(1), k), QFElem(Rat(0), Rat(1), k)},
    };
    for (const auto& [a, b] : params) {
        const auto base = a.is_rational() && b.is_rational() ? std::optional<QuadField>() : std::optional(k);
        const SCAlgebra A = structure_constants(QuatAlgebra(base, a, b));
        const auto want = printed_tables(a, b);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(regular_rep(A, basis_vector(i)), want[i]) << i;
        EXPECT_EQ(regular_rep(A, basis_vector(1) + basis_vector(2)), want[1] + want[2]);
    }
}

TEST(Algebra, MultiplicationExamples) {
    const SCAlgebra A = structure_constants(QuatAlgebra::rational(Rat(3), Rat(-5)));
    const AlgElem one = basis_vector(0), u = basis_vector(1), v = basis_vector(2), uv = basis_vector(3);
    const AlgElem x = {QFElem(2), QFElem(-1), QFElem(Rat(1, 2)), QFElem(7)};
    EXPECT_EQ(multiply(A, one, x), x);
    EXPECT_EQ(multiply(A, x, one), x);
    EXPECT_EQ(multiply(A, u, v), uv);
    EXPECT_EQ(multiply(A, u, u), scalar(A, QFElem(3)));
    EXPECT_EQ(multiply(A, v, u), QFElem(-1) * uv);
}

TEST(Algebra, RegularRepComposesInReverseAndLeftMultIsHomomorphism) {
    std::mt19937 rng(5);
    const QuadField k(Int(-3));
    const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
    EXPECT_EQ(regular_rep(A, A.one), (Matrix<QFElem>::identity(4)));
    EXPECT_EQ(left_mult_matrix(A, A.one), (Matrix<QFElem>::identity(4)));
    for (int t = 0; t < 10; ++t) {
        const AlgElem x = random_elem(rng, k), y = random_elem(rng, k);
        const AlgElem xy = multiply(A, x, y);
        EXPECT_EQ(left_mult_matrix(A, xy), left_mult_matrix(A, x) * left_mult_matrix(A, y));
        EXPECT_EQ(regular_rep(A, xy), regular_rep(A, y) * regular_rep(A, x));
    }
}

TEST(Algebra, ReducedTrace) {
    const SCAlgebra A = structure_constants(QuatAlgebra::rational(Rat(2), Rat(-7)));
    EXPECT_EQ(reduced_trace(A, A.one), QFElem(2));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(reduced_trace(A, basis_vector(i)), QFElem(0));
    EXPECT_EQ(reduced_trace(A, scalar(A, QFElem(3)) + basis_vector(1)), QFElem(6));
    // The trace does not depend on the presentation.
    std::mt19937 rng(3);
    const QuadField k(Int(2));
    const SCAlgebra M = matrix_algebra(k);
    const auto g = random_invertible(rng, k);
    const SCAlgebra C = change_basis(M, g);
    const auto ginv = *inverse(g);
    for (int t = 0; t < 10; ++t) {
        const AlgElem x = random_elem(rng, k);
        AlgElem y{};  // coordinates of x in the new basis
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) y[i] += ginv(i, j) * x[j];
        EXPECT_EQ(reduced_trace(C, y), reduced_trace(M, x));
        EXPECT_EQ(reduced_trace(M, x), x[0] + x[3]);
    }
}

TEST(Algebra, DeterminantIsSquaredNorm) {
    std::mt19937 rng(8);
    const QuadField k(Int(13));
    const QFElem a(Rat(1), Rat(1), k), b(Rat(0), Rat(3), k);
    const QuatAlgebra H(k, a, b);
    const SCAlgebra A = structure_constants(H);
    for (int t = 0; t < 20; ++t) {
        const AlgElem x = random_elem(rng, k);
        const QFElem n = norm(H, Quaternion{{x[0], x[1], x[2], x[3]}});
        EXPECT_EQ(determinant(regular_rep(A, x)), n * n);
    }
}

TEST(Algebra, Validate) {
    const SCAlgebra A = structure_constants(QuatAlgebra::rational(Rat(-1), Rat(-1)));
    EXPECT_TRUE(validate(A).ok);
    EXPECT_TRUE(validate(matrix_algebra(QuadField(Int(5)))).ok);

    SCAlgebra bad = A;
    bad.gamma[1][2][3] = QFElem(2);  // u v = 2 uv
    const auto r = validate(bad);
    ASSERT_FALSE(r.ok);
    // First failing triple in lexicographic order, found by direct search.
    std::string first;
    for (std::size_t i = 0; i < 4 && first.empty(); ++i)
        for (std::size_t j = 0; j < 4 && first.empty(); ++j)
            for (std::size_t l = 0; l < 4 && first.empty(); ++l) {
                const auto x = basis_vector(i), y = basis_vector(j), z = basis_vector(l);
                if (multiply(bad, multiply(bad, x, y), z) != multiply(bad, x, multiply(bad, y, z)))
                    first = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(l + 1) + ")";
            }
    ASSERT_FALSE(first.empty());
    EXPECT_EQ(r.defect, "associativity fails on basis triple " + first);

    const SCAlgebra zero{std::nullopt, {}, {}};
    const auto z = validate(zero);
    EXPECT_FALSE(z.ok);
    EXPECT_EQ(z.defect, "no identity");
}

TEST(Algebra, QuaternionBasisOnMatrixAlgebra) {
    // Basis E11, E22, E12, E21: the first candidate is E22 with trace-zero
    // part (E22 - E11) / 2.
    Matrix<QFElem> perm(4, 4);
    perm(0, 0) = perm(3, 1) = perm(1, 2) = perm(2, 3) = 1;
    const SCAlgebra A = change_basis(matrix_algebra(std::nullopt), perm);
    const auto res = quaternion_basis(A);
    ASSERT_TRUE(std::holds_alternative<QuatBasis>(res));
    const auto& B = std::get<QuatBasis>(res);
    expect_basis_invariants(A, B);
    EXPECT_TRUE(is_rational_square(B.alpha.a()));
}

TEST(Algebra, QuaternionBasisOnQuaternionPresentation) {
    for (const auto& [a, b] : std::vector<std::pair<long, long>>{{-1, -1}, {2, 7}, {-3, 5}, {6, -10}}) {
        const SCAlgebra A = structure_constants(QuatAlgebra::rational(Rat(a), Rat(b)));
        const auto res = quaternion_basis(A);
        ASSERT_TRUE(std::holds_alternative<QuatBasis>(res));
        const auto& B = std::get<QuatBasis>(res);
        expect_basis_invariants(A, B);
        EXPECT_EQ(squarefree_split(Int(B.alpha.a() * B.alpha.a().get_den() * B.alpha.a().get_den())).squarefree,
                  squarefree_split(Int(a)).squarefree);
        EXPECT_EQ(squarefree_split(Int(B.beta.a() * B.beta.a().get_den() * B.beta.a().get_den())).squarefree,
                  squarefree_split(Int(b)).squarefree);
    }
}

TEST(Algebra, QuaternionBasisReportsNilpotentCandidate) {
    const SCAlgebra A = matrix_algebra(std::nullopt);
    const auto res = quaternion_basis(A);
    ASSERT_TRUE(std::holds_alternative<EarlyZeroDivisor>(res));
    EXPECT_EQ(std::get<EarlyZeroDivisor>(res).element, basis_vector(1));
}

TEST(Algebra, QuaternionBasisOnConjugatedPresentations) {
    std::mt19937 rng(17);
    for (long d : {-7L, 3L, 13L}) {
        const QuadField k{Int(d)};
        for (int t = 0; t < 3; ++t) {
            const SCAlgebra A = change_basis(matrix_algebra(k), random_invertible(rng, k));
            ASSERT_TRUE(validate(A).ok);
            for (const auto& res : {quaternion_basis(A), factorable_quaternion_basis(A)}) {
                if (const auto* e = std::get_if<EarlyZeroDivisor>(&res)) {
                    EXPECT_FALSE(is_zero(e->element));
                    EXPECT_EQ(determinant(regular_rep(A, e->element)), QFElem(0));
                } else {
                    expect_basis_invariants(A, std::get<QuatBasis>(res));
                }
            }
        }
    }
}

TEST(Algebra, ChangeBasisRejectsSingularMatrix) {
    EXPECT_THROW(change_basis(matrix_algebra(std::nullopt), Matrix<QFElem>(4, 4)), DependentBasis);
}
