#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sintheta {

// Thrown when an iterative decomposition fails to meet its residual target.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a theorem precondition (gap > 0, rank, ...) fails.  The CLI maps
// this to exit code 2; it is distinct from numerical or usage errors.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A bound evaluator found observed > bound beyond tolerance.  Always a bug in
// this library (the theorems are proved), never a recordable result.
class SoundnessViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense real matrix, row-major. All entries are required to be finite.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("DenseMatrix: dimensions must be positive");
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("DenseMatrix: dimensions must be positive");
        if (data_.size() != rows * cols)
            throw std::invalid_argument("DenseMatrix: entry count " +
                                        std::to_string(data_.size()) + " != " +
                                        std::to_string(rows * cols));
        for (double x : data_)
            if (!std::isfinite(x))
                throw std::invalid_argument("DenseMatrix: non-finite entry");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static DenseMatrix diagonal(const std::vector<double>& d) {
        DenseMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Columns [c0, c1) as a rows x (c1-c0) matrix.
    DenseMatrix columns(std::size_t c0, std::size_t c1) const {
        if (c0 >= c1 || c1 > cols_)
            throw std::invalid_argument("DenseMatrix::columns: bad range");
        DenseMatrix b(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                b(i, j - c0) = (*this)(i, j);
        return b;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix add: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix subtract: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

inline DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (double& x : c.data()) x *= s;
    return c;
}

inline double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (double x : a.data()) sum += x * x;
    return std::sqrt(sum);
}

/// Kronecker product with block layout a_{ij} * B.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t R = a.rows() * b.rows();
    const std::size_t C = a.cols() * b.cols();
    if (R / b.rows() != a.rows() || C / b.cols() != a.cols() ||
        R > std::numeric_limits<std::size_t>::max() / C)
        throw std::invalid_argument("kron: result dimensions overflow");
    DenseMatrix k(R, C);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
    return k;
}

/// Column-stacking vectorisation.
inline std::vector<double> vec(const DenseMatrix& a) {
    std::vector<double> v;
    v.reserve(a.rows() * a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            v.push_back(a(i, j));
    return v;
}

inline double euclidean_norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

/// Symmetric real matrix.  Construction symmetrizes via (A + A^T)/2 when the
/// asymmetry is within tolerance and rejects the input otherwise.
class SymmetricMatrix {
public:
    static constexpr double kSymTol = 1e-12;  // relative to max(1, ||A||_F)

    explicit SymmetricMatrix(const DenseMatrix& a) {
        if (a.rows() != a.cols())
            throw std::invalid_argument("SymmetricMatrix: input is not square");
        double max_asym = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = i + 1; j < a.cols(); ++j)
                max_asym = std::max(max_asym, std::abs(a(i, j) - a(j, i)));
        const double scale = std::max(1.0, frobenius_norm(a));
        if (max_asym > kSymTol * scale)
            throw std::invalid_argument(
                "SymmetricMatrix: asymmetry " + std::to_string(max_asym) +
                " exceeds tolerance " + std::to_string(kSymTol * scale));
        m_ = a;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = i + 1; j < a.cols(); ++j) {
                const double avg = 0.5 * (a(i, j) + a(j, i));
                m_(i, j) = avg;
                m_(j, i) = avg;
            }
    }

    static SymmetricMatrix diagonal(const std::vector<double>& d) {
        return SymmetricMatrix(DenseMatrix::diagonal(d));
    }

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const DenseMatrix& dense() const { return m_; }

private:
    DenseMatrix m_;
};

inline double frobenius_norm(const SymmetricMatrix& a) { return frobenius_norm(a.dense()); }

}  // namespace sintheta
