#include <doctest.h>

#include <sstream>

#include "loopsampler/matrix.hpp"
#include "test_util.hpp"

using namespace loopsampler;
using loopsampler::test::random_complex;

TEST_CASE("submatrix_multiset selects and duplicates") {
    ComplexMatrix m(2, 2);
    m << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);

    ComplexMatrix s = submatrix_multiset(m, ModeMultiset({0}), ModeMultiset({1}));
    CHECK(s.rows() == 1);
    CHECK(s(0, 0) == Complex(2, 0));

    ComplexMatrix dup = submatrix_multiset(m, ModeMultiset({0, 0}), ModeMultiset({0, 1}));
    CHECK(dup.row(0) == dup.row(1));

    CHECK_THROWS_AS(submatrix_multiset(m, ModeMultiset({2}), ModeMultiset({0})), BoundsError);
}

TEST_CASE("random_unitary is deterministic and unitary") {
    ComplexMatrix u1 = random_unitary(5, 3);
    ComplexMatrix u2 = random_unitary(5, 3);
    ComplexMatrix u3 = random_unitary(5, 4);
    CHECK(u1 == u2);
    CHECK(u1 != u3);

    ComplexMatrix g = u1.adjoint() * u1 - ComplexMatrix::Identity(5, 5);
    CHECK(g.cwiseAbs().maxCoeff() <= 1e-12);

    ComplexMatrix one = random_unitary(1, 7);
    CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-14);

    CHECK_THROWS_AS(random_unitary(0, 1), DimensionError);
}

TEST_CASE("check_isometry") {
    IsometryCheck ok = check_isometry(ComplexMatrix::Identity(4, 4), 1e-12);
    CHECK(ok.passed);
    CHECK(ok.deviation == 0.0);

    CHECK_THROWS_AS(check_isometry(ComplexMatrix::Ones(2, 3), 1e-10), DimensionError);

    // tall slice of a unitary is an isometry
    ComplexMatrix u = random_unitary(6, 11);
    CHECK(check_isometry(u.leftCols(4), 1e-12).passed);
}

TEST_CASE("matrix_fidelity basics and symmetries") {
    ComplexMatrix m = random_complex(4, 4, 21);
    CHECK(matrix_fidelity(m, m) == doctest::Approx(1.0));

    ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    CHECK(matrix_fidelity(a, b) == doctest::Approx(0.0));

    ComplexMatrix n = random_complex(4, 4, 22);
    CHECK(matrix_fidelity(m, n) == doctest::Approx(matrix_fidelity(n, m)));
    CHECK(matrix_fidelity(m, std::polar(1.0, 0.7) * n) ==
          doctest::Approx(matrix_fidelity(m, n)));

    CHECK_THROWS_AS(matrix_fidelity(m, ComplexMatrix::Ones(3, 3)), DimensionError);
    CHECK_THROWS_AS(matrix_fidelity(ComplexMatrix::Zero(2, 2), ComplexMatrix::Ones(2, 2)),
                    NumericalError);
}

TEST_CASE("matrix text format round-trips bit-exactly") {
    ComplexMatrix m = random_complex(3, 5, 77);
    std::stringstream ss;
    ss << "# a comment line\n";
    write_matrix(ss, m);
    ComplexMatrix back = read_matrix(ss);
    CHECK(back == m);
}
