#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "orbitbound/linalg.hpp"

using namespace orbitbound;

namespace {

Matrix random_symmetric(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = dist(rng);
    return a;
}

ComplexMatrix random_complex(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
    return a;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("jacobi eigenvalues of [[2,1],[1,2]] are 1 and 3") {
    const Matrix k = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const SymmetricEigen eig = jacobi_eigen(k);
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("jacobi eigen solves random symmetric matrices") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const Matrix a = random_symmetric(n, rng);
        const SymmetricEigen eig = jacobi_eigen(a);
        REQUIRE(static_cast<int>(eig.values.size()) == n);
        CHECK(std::is_sorted(eig.values.begin(), eig.values.end()));
        const double scale = std::max(1.0, a.frobenius_norm());
        // Residual A v = lambda v per eigenpair.
        for (int j = 0; j < n; ++j) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, j);
            const Vector av = a.apply(v);
            for (int i = 0; i < n; ++i)
                CHECK(std::abs(av[i] - eig.values[j] * v[i]) <= 1e-10 * scale);
        }
        // Orthonormal eigenvector matrix.
        for (int j = 0; j < n; ++j)
            for (int l = j; l < n; ++l) {
                double g = 0.0;
                for (int i = 0; i < n; ++i) g += eig.vectors(i, j) * eig.vectors(i, l);
                CHECK(std::abs(g - (j == l ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("jacobi eigen of a diagonal matrix returns the sorted diagonal") {
    const Vector d = {3.0, -1.0, 2.0};
    const SymmetricEigen eig = jacobi_eigen(Matrix::diagonal(d));
    CHECK(eig.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.values[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("real lu solve reproduces a known solution") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5;
        Matrix a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
            a(i, i) += 5.0;  // keep well-conditioned
        }
        Vector x_true(n);
        for (double& v : x_true) v = dist(rng);
        const Vector b = a.apply(x_true);
        const Vector x = lu_solve(a, b);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-11));
    }
}

TEST_CASE("lu factorization flags a singular matrix") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    const LuFactorization lu{a};
    CHECK(lu.singular());
    CHECK_THROWS_AS(lu_solve(a, Vector{1.0, 1.0}), NumericalError);
}

TEST_CASE("complex lu solve reproduces a known solution") {
    std::mt19937 rng(11);
    const ComplexMatrix a = random_complex(4, rng);
    ComplexVector x_true = {Complex(1, 2), Complex(-0.5, 0.25), Complex(0, -3), Complex(2, 0)};
    const ComplexVector b = a.apply(x_true);
    const ComplexVector x = lu_solve(a, b);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - x_true[i]) <= 1e-11);
}

TEST_CASE("svd of a diagonal matrix recovers the moduli") {
    ComplexMatrix a(3, 3);
    a(0, 0) = Complex(0.0, 3.0);
    a(1, 1) = Complex(-2.0, 0.0);
    a(2, 2) = Complex(0.0, 0.0);
    const ComplexSvd svd = jacobi_svd(a);
    REQUIRE(svd.singular_values.size() == 3);
    CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(svd.singular_values[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(svd.singular_values[2] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("svd factorization reconstructs random matrices") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const ComplexMatrix a = random_complex(n, rng);
        const ComplexSvd svd = jacobi_svd(a);
        CHECK(std::is_sorted(svd.singular_values.rbegin(), svd.singular_values.rend()));
        // Reconstruct a = u diag(s) v^H entrywise.
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex sum = 0.0;
                for (int k = 0; k < n; ++k)
                    sum += svd.u(i, k) * svd.singular_values[k] * std::conj(svd.v(j, k));
                err = std::max(err, std::abs(sum - a(i, j)));
            }
        CHECK(err <= 1e-12 * std::max(1.0, a.frobenius_norm()));
    }
}

TEST_CASE("svd resolves singular value ratios at the near-resonance threshold") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-11;
    const ComplexSvd svd = jacobi_svd(a);
    CHECK(svd.singular_values[1] / svd.singular_values[0] ==
          doctest::Approx(1e-11).epsilon(1e-8));
}

TEST_CASE("least squares returns the minimal-norm solution on a singular system") {
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;  // second row/column identically zero
    const ComplexVector b = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    const ComplexSvd svd = jacobi_svd(a);
    const LeastSquaresSolution ls = svd_least_squares(svd, a, b, 1e-12);
    CHECK(ls.rank == 1);
    CHECK(std::abs(ls.x[0] - Complex(1.0, 0.0)) <= 1e-13);
    CHECK(std::abs(ls.x[1]) <= 1e-13);
    CHECK(ls.residual == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("least squares matches lu on a well-posed system") {
    std::mt19937 rng(5);
    const ComplexMatrix a = random_complex(3, rng);
    const ComplexVector b = {Complex(1, 0), Complex(0, 1), Complex(-1, 2)};
    const LeastSquaresSolution ls = svd_least_squares(jacobi_svd(a), a, b, 1e-12);
    const ComplexVector x = lu_solve(a, b);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ls.x[i] - x[i]) <= 1e-10);
    CHECK(ls.residual <= 1e-12);
    CHECK(ls.rank == 3);
}

TEST_CASE("matrix helpers: symmetrize, asymmetry, frobenius") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}});
    CHECK(a.asymmetry() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
    const Matrix s = a.symmetrized();
    CHECK(s(0, 1) == doctest::Approx(1.0));
    CHECK(s(1, 0) == doctest::Approx(1.0));
    CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
    CHECK(a.all_finite());
}

}  // TEST_SUITE
