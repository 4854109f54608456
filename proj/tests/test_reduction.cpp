#include <gtest/gtest.h>

#include <random>

#include "quatsplit/quadform.hpp"
#include "quatsplit/reduction.hpp"

using namespace quatsplit;

namespace {

Matrix<Int> diag(std::initializer_list<long> d) {
    Matrix<Int> g(d.size(), d.size());
    std::size_t i = 0;
    for (long x : d) {
        g(i, i) = x;
        ++i;
    }
    return g;
}

Matrix<Rat> to_rat(const Matrix<Int>& m) {
    Matrix<Rat> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

// Product of random elementary column operations: unimodular, with
// entries that grow quickly.
Matrix<Int> random_unimodular(std::mt19937& rng, std::size_t n, int steps) {
    Matrix<Int> u = Matrix<Int>::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> f(-3, 3);
    for (int s = 0; s < steps; ++s) {
        const std::size_t a = idx(rng), b = idx(rng);
        if (a == b) continue;
        const Int k(f(rng));
        for (std::size_t r = 0; r < n; ++r) u(r, a) += k * u(r, b);
    }
    return u;
}

Int bilinear(const Matrix<Int>& g, const std::vector<Int>& x, const std::vector<Int>& y) {
    Int s = 0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) s += x[i] * g(i, j) * y[j];
    return s;
}

Int det(const Matrix<Int>& m) { return Int(determinant(to_rat(m))); }

}  // namespace

TEST(Reduction, MinimizeStripsSquareFactors) {
    const std::vector<Matrix<Int>> forms = {diag({1, 1, -9}), diag({4, 9, -36}), diag({1, 2, -3, -6 * 25}),
                                            diag({3, -3 * 49, 5})};
    for (const auto& G : forms) {
        std::vector<Int> primes;
        for (const auto& pe : factor(det(G)).factors)
            if (pe.exponent >= 2) primes.push_back(pe.prime);
        const auto M = minimize_form(G, primes);
        // The new Gram is proportional to the form restricted to the new basis.
        const Matrix<Rat> H = M.basis.transpose() * to_rat(G) * M.basis;
        std::optional<Rat> ratio;
        for (std::size_t i = 0; i < H.rows(); ++i)
            for (std::size_t j = 0; j < H.cols(); ++j) {
                if (M.gram(i, j) == 0) {
                    EXPECT_EQ(H(i, j), 0);
                    continue;
                }
                const Rat r = H(i, j) / Rat(M.gram(i, j));
                if (!ratio) ratio = r;
                EXPECT_EQ(r, *ratio);
            }
        EXPECT_NE(determinant(M.basis), 0);
        EXPECT_LT(abs_int(det(M.gram)), abs_int(det(G)));
    }
    // x^2 + y^2 - 9 z^2 minimizes to a unimodular form.
    EXPECT_EQ(abs_int(det(minimize_form(diag({1, 1, -9}), {Int(3)}).gram)), 1);
}

TEST(Reduction, IndefiniteLllKeepsTheLattice) {
    std::mt19937 rng(6);
    for (const auto& G0 : {diag({1, 1, -2}), diag({1, -1, 3, -5}), diag({2, 3, -7, 1, -1})}) {
        for (int t = 0; t < 5; ++t) {
            const Matrix<Int> U = random_unimodular(rng, G0.rows(), 30);
            const Matrix<Int> G = U.transpose() * G0 * U;
            const auto R = indefinite_lll(G);
            EXPECT_EQ(R.gram, R.transform.transpose() * G * R.transform);
            EXPECT_EQ(abs_int(det(R.transform)), 1);
            if (R.zero) {
                const QuadForm q(to_rat(G));
                EXPECT_EQ(evaluate(q, *R.zero), 0);
                bool nonzero = false;
                for (const auto& x : *R.zero) nonzero = nonzero || x != 0;
                EXPECT_TRUE(nonzero);
            }
        }
    }
}

TEST(Reduction, SpanBasisKeepsTheLattice) {
    const std::vector<std::vector<Int>> rows = {{Int(2), Int(4), Int(0)}, {Int(3), Int(6), Int(1)},
                                                {Int(1), Int(0), Int(0)}, {Int(5), Int(10), Int(1)}};
    const auto b = detail::span_basis(rows, 3);
    ASSERT_EQ(b.size(), 3u);
    // The span is {(x, y, z) : y = 2 z mod 4}, of index 4 in Z^3.
    Matrix<Int> m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = b[i][j];
    EXPECT_EQ(abs_int(det(m)), 4);
    for (const auto& r : b) EXPECT_EQ(mod(Int(r[1] - 2 * r[2]), Int(4)), 0);
    // Dependent rows collapse.
    EXPECT_EQ(detail::span_basis({{Int(1), Int(2)}, {Int(2), Int(4)}, {Int(-3), Int(-6)}}, 2).size(), 1u);
}

TEST(Reduction, UnimodularZero) {
    std::mt19937 rng(9);
    for (const auto& G0 : {diag({1, -1}), diag({1, 1, -1}), diag({1, -1, -1, -1}), diag({1, 1, 1, -1, -1, -1})}) {
        for (int t = 0; t < 5; ++t) {
            const Matrix<Int> U = random_unimodular(rng, G0.rows(), 40);
            const Matrix<Int> G = U.transpose() * G0 * U;
            const auto z = detail::unimodular_zero(G);
            ASSERT_TRUE(z.has_value());
            EXPECT_EQ(bilinear(G, *z, *z), 0);
            bool nonzero = false;
            for (const auto& x : *z) nonzero = nonzero || x != 0;
            EXPECT_TRUE(nonzero);
        }
    }
    // Definite forms have no zero.
    EXPECT_FALSE(detail::unimodular_zero(diag({1, 1, 1})).has_value());
    EXPECT_FALSE(detail::unimodular_zero(diag({-1, -1})).has_value());
}

TEST(Reduction, IsotropicSublatticeOfHyperbolicForm) {
    std::mt19937 rng(10);
    for (std::size_t half : {1u, 2u, 3u}) {
        Matrix<Int> G0(2 * half, 2 * half);
        for (std::size_t i = 0; i < half; ++i) G0(i, i) = 1, G0(half + i, half + i) = -1;
        for (int t = 0; t < 4; ++t) {
            const Matrix<Int> U = random_unimodular(rng, G0.rows(), 50);
            const Matrix<Int> G = U.transpose() * G0 * U;
            const auto W = detail::isotropic_sublattice(G);
            ASSERT_EQ(W.size(), half);
            for (std::size_t i = 0; i < W.size(); ++i)
                for (std::size_t j = 0; j < W.size(); ++j) EXPECT_EQ(bilinear(G, W[i], W[j]), 0);
            Matrix<Rat> span(G0.rows(), W.size());
            for (std::size_t j = 0; j < W.size(); ++j)
                for (std::size_t i = 0; i < G0.rows(); ++i) span(i, j) = Rat(W[j][i]);
            EXPECT_EQ(rank(span), half);
        }
    }
    // A non-unimodular form is left alone.
    EXPECT_TRUE(detail::isotropic_sublattice(diag({1, -2})).empty());
}

TEST(Reduction, IsotropicSubspaceOfRationalForm) {
    // x^2 + y^2 - 9 z^2 - w^2 scaled by 1/4: minimizes to the unimodular
    // form diag(1, 1, -1, -1), whose isotropic subspaces have dimension 2.
    const QuadForm q = QuadForm::diagonal({Rat(1, 4), Rat(1, 4), Rat(-9, 4), Rat(-1, 4)});
    const auto W = detail::isotropic_subspace(q);
    ASSERT_EQ(W.size(), 2u);
    for (const auto& x : W) EXPECT_EQ(evaluate(q, x), 0);
    std::vector<Rat> sum(4, Rat(0));
    for (std::size_t i = 0; i < 4; ++i) sum[i] = W[0][i] + W[1][i];
    EXPECT_EQ(evaluate(q, sum), 0);
    // No unimodular model: empty.
    EXPECT_TRUE(detail::isotropic_subspace(QuadForm::diagonal({Rat(1), Rat(1), Rat(-3)})).empty());
}

TEST(Reduction, CappedFactoring) {
    EXPECT_TRUE(try_factor(Int(360), 1));
    EXPECT_TRUE(try_factor(Int(-97), 1));
    EXPECT_FALSE(try_factor(Int(0), 100));
    Int p, q;
    mpz_nextprime(p.get_mpz_t(), Int("1000000000000").get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), Int("2000000000000").get_mpz_t());
    const Int n = p * q;
    // Splitting n needs about a million rho steps; one block is not enough.
    EXPECT_FALSE(try_factor(n, 1));
    EXPECT_FALSE(try_factor(n, 1));  // same answer every time
    EXPECT_TRUE(try_factor(n, 1, {p}));
    EXPECT_TRUE(try_factor(Int(n * 12), 1, {q}));
    EXPECT_FALSE(factors_quickly(make_rat(Int(1), n), {}, 1));
    EXPECT_TRUE(factors_quickly(make_rat(Int(7), n), {p}, 1));
    // The allowance is restored afterwards: unlimited factoring still works.
    EXPECT_EQ(factor(n).value(), n);
}

TEST(Reduction, PrimesOf) {
    EXPECT_EQ(primes_of({make_rat(Int(12), Int(35))}), (std::vector<Int>{Int(2), Int(3), Int(5), Int(7)}));
    EXPECT_EQ(primes_of({Rat(-18), Rat(0), make_rat(Int(1), Int(4))}), (std::vector<Int>{Int(2), Int(3)}));
    EXPECT_TRUE(primes_of({Rat(1), Rat(-1)}).empty());
}

TEST(Reduction, CoprimeBase) {
    const auto base = coprime_base({Int(12), Int(18), Int(35)});
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j) EXPECT_EQ(gcd(base[i], base[j]), 1);
    // Every input is a product of powers of base elements.
    for (Int n : {Int(12), Int(18), Int(35)}) {
        for (const auto& b : base)
            while (n % b == 0) n /= b;
        EXPECT_EQ(n, 1);
    }
    EXPECT_THROW(coprime_base({Int(0)}), InvalidArgument);

    const auto splits = squarefree_split_all({Int(72), Int(-50), Int(7)});
    ASSERT_EQ(splits.size(), 3u);
    for (const auto& [n, s] : std::vector<std::pair<long, SquarefreeSplit>>{{72, splits[0]}, {-50, splits[1]}, {7, splits[2]}}) {
        EXPECT_EQ(s.squarefree, squarefree_split(Int(n)).squarefree);
        EXPECT_EQ(s.cofactor, squarefree_split(Int(n)).cofactor);
        EXPECT_EQ(Int(s.squarefree * s.cofactor * s.cofactor), Int(n));
    }
}
