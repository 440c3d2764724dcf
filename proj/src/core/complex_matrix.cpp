#include "csqar/core/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "csqar/error.hpp"

namespace csqar {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DomainError("ComplexMatrix: ragged initializer list");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) sum += (*this)(i, i);
    return sum;
}

double ComplexMatrix::maxAbs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::isHermitian(double tol) const {
    if (!isSquare()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

std::vector<double> ComplexMatrix::realDiagonal() const {
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i).real();
    return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DomainError("ComplexMatrix: dimension mismatch in +=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DomainError("ComplexMatrix: dimension mismatch in -=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& z : data_) z *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DomainError("ComplexMatrix: dimension mismatch in product");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

ComplexMatrix commutatorFlow(const ComplexMatrix& h, const ComplexMatrix& rho) {
    ComplexMatrix c = h * rho;
    c -= rho * h;
    c *= Complex(0.0, -1.0);
    return c;
}

double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DomainError("maxAbsDiff: dimension mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

} // namespace csqar
