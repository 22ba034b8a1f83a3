#include "diqkd/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace diqkd {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& c : data_) m = std::max(m, std::abs(c));
    return m;
}

double ComplexMatrix::off_diagonal_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j) s += std::norm(at(i, j));
    return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    ComplexMatrix p = (*this) * dagger();
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            Complex want = (i == j) ? Complex(1.0) : Complex(0.0);
            if (std::abs(p.at(i, j) - want) > tol) return false;
        }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (Complex& c : data_) c *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a.at(i, j);
            if (aij == Complex(0.0)) continue;
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    r.at(i * nb + k, j * nb + l) = aij * b.at(k, l);
        }
    return r;
}

ComplexMatrix outer(const std::vector<Complex>& v) {
    ComplexMatrix r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r.at(i, j) = v[i] * std::conj(v[j]);
    return r;
}

namespace {

// One Jacobi rotation annihilating the (p,q) entry of a Hermitian matrix.
// A <- G^dag A G and V <- V G, where G differs from the identity only in the
// (p,q) block [[c, -s*phase], [s*conj(phase), c]] with phase = A(p,q)/|A(p,q)|.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a.at(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;

    const Complex phase = apq / mag;
    const double app = a.at(p, p).real();
    const double aqq = a.at(q, q).real();
    const double tau = (app - aqq) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.dim();
    // A <- A G
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a.at(k, p), akq = a.at(k, q);
        a.at(k, p) = c * akp + s * std::conj(phase) * akq;
        a.at(k, q) = -s * phase * akp + c * akq;
    }
    // A <- G^dag A
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a.at(p, k), aqk = a.at(q, k);
        a.at(p, k) = c * apk + s * phase * aqk;
        a.at(q, k) = -s * std::conj(phase) * apk + c * aqk;
    }
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;
    a.at(p, p) = a.at(p, p).real();
    a.at(q, q) = a.at(q, q).real();
    // V <- V G
    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v.at(k, p), vkq = v.at(k, q);
        v.at(k, p) = c * vkp + s * std::conj(phase) * vkq;
        v.at(k, q) = -s * phase * vkp + c * vkq;
    }
}

}  // namespace

EigenSystem hermitian_eigensystem(ComplexMatrix m, double tol, int max_sweeps) {
    const std::size_t n = m.dim();
    if (n == 0) throw std::invalid_argument("empty matrix");
    if (!m.is_hermitian(1e-12)) throw std::invalid_argument("matrix is not Hermitian");

    ComplexMatrix v = ComplexMatrix::identity(n);
    bool converged = m.off_diagonal_norm() < tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(m, v, p, q);
        converged = m.off_diagonal_norm() < tol;
    }
    if (!converged) throw std::runtime_error("Jacobi eigensolver did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return m.at(a, a).real() > m.at(b, b).real();
    });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m.at(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, k) = v.at(i, order[k]);
    }
    return out;
}

}  // namespace diqkd
