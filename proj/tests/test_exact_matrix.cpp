#include <canon/exact_matrix.hpp>

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace canon;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows)
{
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

oracle::QMatrix to_rows(const RationalMatrix& m)
{
    oracle::QMatrix rows(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 7);
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational q(num(rng), den(rng));
            q.canonicalize();
            m(i, j) = q;
        }
    return m;
}

} // namespace

TEST_CASE("rational parsing accepts p/q and rejects zero denominators", "[rational]")
{
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational(" -4 ") == Rational(-4));
    CHECK(to_string(parse_rational("10/4")) == "5/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}

TEST_CASE("determinant matches cofactor expansion on random matrices", "[matrix]")
{
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 5; ++n)
        for (int rep = 0; rep < 20; ++rep) {
            const RationalMatrix m = random_matrix(rng, n);
            CHECK(determinant(m) == oracle::leibniz_determinant(to_rows(m)));
        }
}

TEST_CASE("inverse times matrix is the identity", "[matrix]")
{
    std::mt19937_64 rng(11);
    int tested = 0;
    while (tested < 40) {
        const RationalMatrix m = random_matrix(rng, 1 + tested % 5);
        if (determinant(m) == 0) continue;
        CHECK(m * inverse(m) == RationalMatrix::identity(m.rows()));
        ++tested;
    }
}

TEST_CASE("singular matrices are rejected by inverse and solve", "[matrix]")
{
    const RationalMatrix s = from_rows({{1, 2}, {2, 4}});
    CHECK(determinant(s) == 0);
    CHECK_THROWS_AS(inverse(s), SingularMatrixError);
    CHECK_THROWS_AS(solve(s, RationalMatrix::identity(2)), SingularMatrixError);
}

TEST_CASE("Bareiss adjugate satisfies adj(A) A = det(A) I", "[matrix]")
{
    IntegerMatrix a(3, 3);
    const long vals[3][3] = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = vals[i][j];
    const BareissResult r = bareiss_adjugate(a);
    CHECK(r.determinant == 4);
    const IntegerMatrix prod = r.adjugate * a;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(prod(i, j) == (i == j ? r.determinant : Integer(0)));
}

TEST_CASE("empty matrix has determinant one", "[matrix]")
{
    CHECK(determinant(RationalMatrix(0, 0)) == 1);
    CHECK(inverse(RationalMatrix(0, 0)).rows() == 0);
}

TEST_CASE("rank and nullspace are consistent", "[matrix]")
{
    const RationalMatrix a = from_rows({{1, 1, 0, 0}, {0, 1, 1, 0}, {1, 2, 1, 0}});
    CHECK(rank(a) == 2);
    const RationalMatrix k = nullspace(a);
    CHECK(k.cols() == 2);
    const RationalMatrix zero = a * k;
    for (std::size_t i = 0; i < zero.rows(); ++i)
        for (std::size_t j = 0; j < zero.cols(); ++j) CHECK(zero(i, j) == 0);
}

TEST_CASE("solve agrees with the oracle Gauss-Jordan solver", "[matrix]")
{
    std::mt19937_64 rng(3);
    int tested = 0;
    while (tested < 20) {
        const RationalMatrix a = random_matrix(rng, 4);
        if (determinant(a) == 0) continue;
        RationalMatrix b(4, 1);
        for (std::size_t i = 0; i < 4; ++i) b(i, 0) = Rational(static_cast<long>(i) + 1);
        const RationalMatrix x = solve(a, b);
        const auto expected = oracle::gauss_solve(to_rows(a), {1, 2, 3, 4});
        for (std::size_t i = 0; i < 4; ++i) CHECK(x(i, 0) == expected[i]);
        ++tested;
    }
}

TEST_CASE("positive definiteness test", "[matrix]")
{
    CHECK(is_positive_definite(from_rows({{2, -1}, {-1, 2}})));
    CHECK_FALSE(is_positive_definite(from_rows({{1, 2}, {2, 1}})));
    CHECK_FALSE(is_positive_definite(from_rows({{1, 0}, {0, 0}})));
    CHECK_FALSE(is_positive_definite(from_rows({{2, 1}, {0, 2}})));
}

TEST_CASE("conversion to double rounds to nearest", "[rational]")
{
    CHECK(to_double(Rational(1, 10)) == 0.1);
    CHECK(to_double(Rational(1, 1000)) == 0.001);
    CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
    CHECK(from_double(0.1) != Rational(1, 10));
    CHECK(to_double(from_double(0.1)) == 0.1);
}
