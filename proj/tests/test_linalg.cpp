#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hiercode/error.hpp"
#include "hiercode/matrix.hpp"
#include "oracle.hpp"

using namespace hiercode;

namespace {

FieldPtr gf(unsigned theta) { return make_field(theta); }

Matrix random_matrix(const FieldPtr& f, std::size_t r, std::size_t c, std::mt19937_64& rng, double zero_rate = 0.0) {
    std::uniform_int_distribution<std::uint32_t> pick(1, f->size() - 1);
    std::bernoulli_distribution zero(zero_rate);
    Vec d;
    for (std::size_t i = 0; i < r * c; ++i) d.push_back(zero(rng) ? Elem{0} : Elem{pick(rng)});
    return Matrix(f, r, c, d);
}

CauchyIndicators distinct_indicators(const FieldPtr& f, std::size_t s, std::size_t t, std::mt19937_64& rng) {
    std::vector<std::uint32_t> pool(f->size());
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    CauchyIndicators ind;
    for (std::size_t i = 0; i < s; ++i) ind.rows.push_back(Elem{pool[i]});
    for (std::size_t j = 0; j < t; ++j) ind.cols.push_back(Elem{pool[s + j]});
    return ind;
}

}  // namespace

TEST(Matrix, CauchyEntriesMatchReference) {
    auto f = gf(8);
    std::mt19937_64 rng(7);
    const oracle::Gf o = oracle::of(*f);
    for (int trial = 0; trial < 20; ++trial) {
        auto ind = distinct_indicators(f, 4, 5, rng);
        EXPECT_EQ(oracle::to_mat(Matrix::cauchy(f, ind)), oracle::cauchy(o, oracle::to_row(ind.rows), oracle::to_row(ind.cols)));
    }
}

TEST(Matrix, CauchyRejectsRepeatedIndicator) {
    auto f = gf(4);
    try {
        Matrix::cauchy(f, {{f->beta_pow(1), f->beta_pow(2)}, {f->beta_pow(2)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IndicatorCollision);
    }
}

TEST(Matrix, SquareCauchySubmatricesAreInvertible) {
    auto f = gf(8);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix c = Matrix::cauchy(f, distinct_indicators(f, 5, 5, rng));
        EXPECT_EQ(c.rank(), 5u);
        EXPECT_EQ(c * c.inverse(), Matrix::identity(f, 5));
    }
}

TEST(Matrix, RankMatchesReference) {
    auto f = gf(4);
    std::mt19937_64 rng(3);
    const oracle::Gf o = oracle::of(*f);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 6);
        Matrix m = random_matrix(f, dim(rng), dim(rng), rng, 0.6);
        EXPECT_EQ(m.rank(), oracle::rank(o, oracle::to_mat(m)));
    }
}

TEST(Matrix, ProductMatchesReference) {
    auto f = gf(8);
    std::mt19937_64 rng(5);
    const oracle::Gf o = oracle::of(*f);
    Matrix a = random_matrix(f, 3, 4, rng), b = random_matrix(f, 4, 2, rng);
    EXPECT_EQ(oracle::to_mat(a * b), oracle::mul(o, oracle::to_mat(a), oracle::to_mat(b)));
    EXPECT_THROW(a * a, Error);
}

TEST(Matrix, SingularInverseThrows) {
    auto f = gf(4);
    EXPECT_THROW(Matrix::zeros(f, 2, 2).inverse(), Error);
    EXPECT_THROW(Matrix::zeros(f, 2, 3).inverse(), Error);
}

TEST(Matrix, SubmatrixIsOneBasedInclusive) {
    auto f = gf(4);
    Matrix m = Matrix::from_powers(f, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
    EXPECT_EQ(m.submatrix(2, 3, 1, 2), Matrix::from_powers(f, {{3, 4}, {6, 7}}));
    EXPECT_EQ(m.submatrix(1, 0, 1, 3).rows(), 0u);
    EXPECT_THROW(m.submatrix(0, 1, 1, 1), Error);
    EXPECT_THROW(m.submatrix(1, 4, 1, 1), Error);
}

TEST(Matrix, DumpUsesPowerNotation) {
    auto f = gf(4);
    Matrix m = hcat({Matrix::from_powers(f, {{0, 5}}), Matrix::zeros(f, 1, 1)});
    EXPECT_EQ(m.dump(), "1 b^5 0\n");
}

TEST(Matrix, ConcatenationShapes) {
    auto f = gf(4);
    Matrix a = Matrix::identity(f, 2), b = Matrix::zeros(f, 2, 3);
    EXPECT_EQ(hcat({a, b}).cols(), 5u);
    EXPECT_EQ(vcat({a, Matrix::zeros(f, 1, 2)}).rows(), 3u);
    EXPECT_THROW(hcat({a, Matrix::zeros(f, 3, 1)}), Error);
    EXPECT_THROW(vcat({a, b}), Error);
}

TEST(Matrix, StackedCheckMatrixShapeAndPreconditions) {
    auto f = gf(8);
    std::mt19937_64 rng(1);
    Matrix a = Matrix::cauchy(f, distinct_indicators(f, 2, 3, rng));
    Matrix m = stacked_check_matrix(a, 2);
    EXPECT_EQ(m.rows(), 3u);
    EXPECT_EQ(m.cols(), 4u);
    EXPECT_THROW(stacked_check_matrix(a, 1), Error);  // t - s = 1 is not < 1
    EXPECT_THROW(stacked_check_matrix(a, 4), Error);  // r > t
}

TEST(Matrix, StackedCheckRowSubsetsHaveFullRank) {
    auto f = gf(8);
    std::mt19937_64 rng(2);
    const oracle::Gf o = oracle::of(*f);
    for (std::size_t s = 1; s <= 3; ++s)
        for (std::size_t t = 1; t <= 3; ++t)
            for (std::size_t r = 1; r <= t; ++r) {
                if (t >= s + r) continue;
                Matrix mt = stacked_check_matrix(Matrix::cauchy(f, distinct_indicators(f, s, t, rng)), r).transpose();
                std::vector<bool> take(mt.rows(), false);
                std::fill(take.begin(), take.begin() + static_cast<std::ptrdiff_t>(t), true);
                do {
                    std::vector<std::size_t> idx;
                    for (std::size_t i = 0; i < take.size(); ++i)
                        if (take[i]) idx.push_back(i);
                    EXPECT_EQ(oracle::rank(o, oracle::to_mat(mt.select_rows(idx))), t);
                } while (std::prev_permutation(take.begin(), take.end()));
            }
}

TEST(Solve, AffineSystemReportsDeterminacy) {
    auto f = gf(4);
    // x0 + x1 = b^3, x1 free otherwise; x2 = 1.
    Matrix a = Matrix::from_powers(f, {{0, 0, -1}, {-1, -1, 0}});
    AffineSolution sol = solve_affine(a, {f->beta_pow(3), f->one()});
    EXPECT_TRUE(sol.consistent);
    EXPECT_FALSE(sol.determined[0]);
    EXPECT_FALSE(sol.determined[1]);
    EXPECT_TRUE(sol.determined[2]);
    EXPECT_EQ(sol.values[2], f->one());
    EXPECT_EQ(sol.rank, 2u);

    AffineSolution bad = solve_affine(Matrix::from_powers(f, {{0}, {0}}), {f->one(), f->beta()});
    EXPECT_FALSE(bad.consistent);
}

TEST(Solve, ErasuresOfMdsCodeword) {
    auto f = gf(8);
    std::mt19937_64 rng(9);
    // Systematic [I | A] with Cauchy A; parity check H = [A^T | I].
    Matrix A = Matrix::cauchy(f, distinct_indicators(f, 3, 3, rng));
    Matrix H = hcat({A.transpose(), Matrix::identity(f, 3)});
    Vec m = {f->beta_pow(4), f->zero(), f->beta_pow(200)};
    Vec c = m;
    Vec par = vec_mul(m, A);
    c.insert(c.end(), par.begin(), par.end());
    for (unsigned mask = 0; mask < 64; ++mask) {
        Received rx = Received::intact(c);
        for (std::size_t j = 0; j < 6; ++j)
            if (mask >> j & 1U) {
                rx.erased[j] = true;
                rx.values[j] = f->zero();
            }
        SolveResult res = solve_erasures(H, rx, vec_zero(3));
        if (rx.erasure_count() <= 3) {
            ASSERT_TRUE(res.ok()) << mask;
            EXPECT_EQ(res.values, c);
        } else {
            EXPECT_EQ(res.status, SolveStatus::Unsolvable);
        }
    }
}
