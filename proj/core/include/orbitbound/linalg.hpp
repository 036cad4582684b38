#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitbound {

using Vector = std::vector<double>;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Raised when an iterative numerical procedure fails to meet its tolerance.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

double dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> v);
double euclidean_norm(std::span<const Complex> v);
double max_abs(std::span<const double> v);

/// Dense row-major real matrix sized for small mechanical systems.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0);

    static Matrix identity(int n);
    static Matrix diagonal(std::span<const double> entries);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix transposed() const;
    /// (A + A^T)/2; requires a square matrix.
    Matrix symmetrized() const;
    Matrix scaled(double factor) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;

    Vector apply(std::span<const double> x) const;
    double frobenius_norm() const;
    /// Frobenius norm of A - A^T; requires a square matrix.
    double asymmetry() const;
    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Dense row-major complex matrix used by the frequency-domain solver.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols, Complex fill = {});

    static ComplexMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    Complex operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    ComplexVector apply(std::span<const Complex> x) const;
    double frobenius_norm() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

struct SymmetricEigen {
    Vector values;   ///< Eigenvalues in ascending order.
    Matrix vectors;  ///< Corresponding eigenvectors as columns.
    int sweeps = 0;  ///< Cyclic sweeps performed before convergence.
};

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// The input is symmetrized first, so callers may pass matrices with
/// round-off level asymmetry. Convergence is declared once the off-diagonal
/// Frobenius norm drops below rel_tol times the Frobenius norm of the input;
/// exceeding max_sweeps raises NumericalError carrying `label`.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-13, int max_sweeps = 100,
                            const std::string& label = {});

/// LU factorization with partial pivoting for small real systems.
class LuFactorization {
public:
    explicit LuFactorization(Matrix a);
    Vector solve(std::span<const double> rhs) const;
    bool singular() const { return singular_; }

private:
    Matrix lu_;
    std::vector<int> perm_;
    bool singular_ = false;
};

/// Solves a x = b by partial-pivot LU; raises NumericalError on an exactly
/// singular pivot.
Vector lu_solve(const Matrix& a, std::span<const double> b);
ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b);

struct ComplexSvd {
    Vector singular_values;  ///< Descending; size min(rows, cols) for square inputs.
    ComplexMatrix u;         ///< Left singular vectors as columns.
    ComplexMatrix v;         ///< Right singular vectors as columns; a = u diag(s) v^H.
    int sweeps = 0;
};

/// One-sided Jacobi SVD of a square complex matrix.
///
/// Column rotations are applied until all column pairs are numerically
/// orthogonal, which resolves tiny singular values to full relative accuracy;
/// this is what makes near-resonance ratio tests around 1e-10 meaningful.
ComplexSvd jacobi_svd(const ComplexMatrix& a, double tol = 1e-14, int max_sweeps = 60);

struct LeastSquaresSolution {
    ComplexVector x;        ///< Minimal-norm least-squares solution.
    double residual = 0.0;  ///< Euclidean norm of a x - b.
    int rank = 0;           ///< Number of singular values above the cutoff.
};

/// Minimal-norm least squares through a precomputed SVD. Singular values
/// below rank_tol times the largest are treated as zero.
LeastSquaresSolution svd_least_squares(const ComplexSvd& svd, const ComplexMatrix& a,
                                       std::span<const Complex> b, double rank_tol);

}  // namespace orbitbound
