#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace csqar {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Sizes in this project stay small (<= a few hundred).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool isSquare() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// Largest |entry|.
    double maxAbs() const;
    /// max |A(i,j) - conj(A(j,i))| <= tol.
    bool isHermitian(double tol = 1e-12) const;
    std::vector<double> realDiagonal() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// -i [h, rho]
ComplexMatrix commutatorFlow(const ComplexMatrix& h, const ComplexMatrix& rho);
/// max |a - b| over entries; dimensions must agree.
double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace csqar
