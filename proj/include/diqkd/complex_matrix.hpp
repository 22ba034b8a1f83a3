#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace diqkd {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major storage. Every dimension in this
// project is tiny (2, 4 or 16), so the algebra is written naively.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }

    Complex& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    ComplexMatrix dagger() const;
    Complex trace() const;
    double max_abs() const;
    double off_diagonal_norm() const;  // Frobenius norm of the off-diagonal part

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-10) const;  // max-abs entrywise U*U^dag vs I

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex scale);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker (tensor) product.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Rank-1 projector v v^dag from a column vector.
ComplexMatrix outer(const std::vector<Complex>& v);

struct EigenSystem {
    std::vector<double> values;  // sorted descending, ties kept in input order
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Rotations run in
// sweeps until the off-diagonal Frobenius norm falls below `tol`; throws
// std::runtime_error if `max_sweeps` is exhausted first.
EigenSystem hermitian_eigensystem(ComplexMatrix m, double tol = 1e-12, int max_sweeps = 100);

}  // namespace diqkd
