#include "orbitbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace orbitbound {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double euclidean_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = entries[i];
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.front().size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::symmetrized() const {
    if (!square()) throw std::invalid_argument("symmetrized: matrix not square");
    Matrix s(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
}

Matrix Matrix::scaled(double factor) const {
    Matrix s = *this;
    for (double& x : s.data_) x *= factor;
    return s;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Matrix::operator+: shape mismatch");
    Matrix s = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += other.data_[i];
    return s;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Matrix::operator-: shape mismatch");
    Matrix s = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= other.data_[i];
    return s;
}

Vector Matrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
    Vector y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::asymmetry() const {
    if (!square()) throw std::invalid_argument("asymmetry: matrix not square");
    double s = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) {
            const double d = (*this)(i, j) - (*this)(j, i);
            s += 2.0 * d * d;
        }
    return std::sqrt(s);
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(int rows, int cols, Complex fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("ComplexMatrix: negative dimension");
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexVector ComplexMatrix::apply(std::span<const Complex> x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("ComplexMatrix::apply: size mismatch");
    ComplexVector y(rows_);
    for (int i = 0; i < rows_; ++i) {
        Complex s{};
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver
// ---------------------------------------------------------------------------

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double rel_tol, int max_sweeps,
                            const std::string& label) {
    if (!input.square()) throw std::invalid_argument("jacobi_eigen: matrix not square");
    const int n = input.rows();
    Matrix a = input.symmetrized();
    Matrix v = Matrix::identity(n);
    const double scale = a.frobenius_norm();
    const std::string which = label.empty() ? std::string{} : " for matrix " + label;

    int sweep = 0;
    if (n > 1 && scale > 0.0) {
        bool converged = false;
        for (; sweep < max_sweeps; ++sweep) {
            if (off_diagonal_norm(a) < rel_tol * scale) {
                converged = true;
                break;
            }
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const double apq = a(p, q);
                    if (apq == 0.0) continue;
                    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    for (int k = 0; k < n; ++k) {  // A <- A J (columns p, q)
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    for (int k = 0; k < n; ++k) {  // A <- J^T A (rows p, q)
                        const double apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk - s * aqk;
                        a(q, k) = s * apk + c * aqk;
                    }
                    for (int k = 0; k < n; ++k) {  // V <- V J
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
        if (!converged && off_diagonal_norm(a) >= rel_tol * scale)
            throw NumericalError("jacobi_eigen: no convergence after " +
                                 std::to_string(max_sweeps) + " sweeps" + which);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    SymmetricEigen result;
    result.values.resize(n);
    result.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        result.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) result.vectors(i, j) = v(i, order[j]);
    }
    result.sweeps = sweep;
    return result;
}

// ---------------------------------------------------------------------------
// LU factorization
// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
    if (!lu_.square()) throw std::invalid_argument("LuFactorization: matrix not square");
    const int n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(lu_(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double cand = std::abs(lu_(i, col));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) {
            singular_ = true;
            return;
        }
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lu_(pivot, j), lu_(col, j));
            std::swap(perm_[pivot], perm_[col]);
        }
        for (int i = col + 1; i < n; ++i) {
            lu_(i, col) /= lu_(col, col);
            const double factor = lu_(i, col);
            for (int j = col + 1; j < n; ++j) lu_(i, j) -= factor * lu_(col, j);
        }
    }
}

Vector LuFactorization::solve(std::span<const double> rhs) const {
    if (singular_) throw NumericalError("LuFactorization::solve: singular matrix");
    const int n = lu_.rows();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("LuFactorization::solve: size mismatch");
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        double s = rhs[perm_[i]];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
        y[i] = s / lu_(i, i);
    }
    return y;
}

Vector lu_solve(const Matrix& a, std::span<const double> b) {
    LuFactorization f(a);
    if (f.singular()) throw NumericalError("lu_solve: singular matrix");
    return f.solve(b);
}

ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b) {
    if (!a.square()) throw std::invalid_argument("lu_solve: matrix not square");
    const int n = a.rows();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: size mismatch");
    ComplexMatrix lu = a;
    ComplexVector x(b.begin(), b.end());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(lu(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double cand = std::abs(lu(i, col));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) throw NumericalError("lu_solve: singular matrix");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
            std::swap(x[pivot], x[col]);
        }
        for (int i = col + 1; i < n; ++i) {
            lu(i, col) /= lu(col, col);
            const Complex factor = lu(i, col);
            for (int j = col + 1; j < n; ++j) lu(i, j) -= factor * lu(col, j);
            x[i] -= factor * x[col];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        Complex s = x[i];
        for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
        x[i] = s / lu(i, i);
    }
    return x;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

ComplexSvd jacobi_svd(const ComplexMatrix& input, double tol, int max_sweeps) {
    if (!input.square()) throw std::invalid_argument("jacobi_svd: matrix not square");
    const int n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                Complex gamma{};
                for (int i = 0; i < n; ++i) {
                    alpha += std::norm(a(i, p));
                    beta += std::norm(a(i, q));
                    gamma += std::conj(a(i, p)) * a(i, q);
                }
                const double absg = std::abs(gamma);
                if (absg <= tol * std::sqrt(alpha * beta) || absg == 0.0) continue;
                rotated = true;
                // Absorb the phase of <a_p, a_q> into column q, then apply the
                // real rotation that diagonalizes the 2x2 Gram block.
                const Complex phase_conj = std::conj(gamma) / absg;
                const double zeta = (beta - alpha) / (2.0 * absg);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const Complex ap = a(i, p);
                    const Complex aq = a(i, q) * phase_conj;
                    a(i, p) = c * ap - s * aq;
                    a(i, q) = s * ap + c * aq;
                }
                for (int i = 0; i < n; ++i) {
                    const Complex vp = v(i, p);
                    const Complex vq = v(i, q) * phase_conj;
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    if (sweep >= max_sweeps)
        throw NumericalError("jacobi_svd: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");

    std::vector<double> sigma(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::norm(a(i, j));
        sigma[j] = std::sqrt(s);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return sigma[i] > sigma[j]; });

    ComplexSvd result;
    result.singular_values.resize(n);
    result.u = ComplexMatrix(n, n);
    result.v = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        result.singular_values[j] = sigma[src];
        // A zero column leaves the corresponding u column zero; consumers only
        // use columns whose singular value passes their rank cutoff.
        const double inv = sigma[src] > 0.0 ? 1.0 / sigma[src] : 0.0;
        for (int i = 0; i < n; ++i) {
            result.u(i, j) = a(i, src) * inv;
            result.v(i, j) = v(i, src);
        }
    }
    result.sweeps = sweep;
    return result;
}

LeastSquaresSolution svd_least_squares(const ComplexSvd& svd, const ComplexMatrix& a,
                                       std::span<const Complex> b, double rank_tol) {
    const int n = a.rows();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("svd_least_squares: size mismatch");
    const double sigma_max = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    const double cutoff = rank_tol * sigma_max;

    LeastSquaresSolution out;
    out.x.assign(n, Complex{});
    for (int j = 0; j < n; ++j) {
        const double sj = svd.singular_values[j];
        if (sj <= cutoff || sj == 0.0) continue;
        ++out.rank;
        Complex coeff{};
        for (int i = 0; i < n; ++i) coeff += std::conj(svd.u(i, j)) * b[i];
        coeff /= sj;
        for (int i = 0; i < n; ++i) out.x[i] += coeff * svd.v(i, j);
    }
    ComplexVector r = a.apply(out.x);
    for (int i = 0; i < n; ++i) r[i] -= b[i];
    out.residual = euclidean_norm(std::span<const Complex>(r));
    return out;
}

}  // namespace orbitbound
