#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "truncue/special_fn.hpp"

namespace truncue {

using complex = std::complex<double>;

// Dense square matrix of complex doubles, row-major.
class complex_matrix {
  public:
    complex_matrix() = default;
    explicit complex_matrix(long dim) : dim_(checked(dim)), data_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

    static complex_matrix identity(long dim) {
        complex_matrix m(dim);
        for (long i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    long dim() const { return dim_; }

    complex& operator()(long i, long j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
                     static_cast<std::size_t>(j)];
    }
    const complex& operator()(long i, long j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
                     static_cast<std::size_t>(j)];
    }

    bool finite() const {
        for (const complex& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

  private:
    static long checked(long dim) {
        detail::require(dim >= 1, "complex_matrix: requires dim >= 1");
        return dim;
    }

    long dim_ = 0;
    std::vector<complex> data_;
};

inline complex trace(const complex_matrix& m) {
    complex sum = 0.0;
    for (long i = 0; i < m.dim(); ++i) sum += m(i, i);
    return sum;
}

// Determinant by LU with partial pivoting; takes a working copy.
inline complex determinant(complex_matrix m) {
    const long n = m.dim();
    complex det = 1.0;
    for (long col = 0; col < n; ++col) {
        long pivot = col;
        for (long i = col + 1; i < n; ++i)
            if (std::abs(m(i, col)) > std::abs(m(pivot, col))) pivot = i;
        if (m(pivot, col) == complex(0.0)) return 0.0;
        if (pivot != col) {
            for (long j = col; j < n; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (long i = col + 1; i < n; ++i) {
            const complex factor = m(i, col) / m(col, col);
            for (long j = col + 1; j < n; ++j) m(i, j) -= factor * m(col, j);
        }
    }
    return det;
}

// max_{ij} |(U*U - I)_{ij}|.
inline double unitarity_residual(const complex_matrix& u) {
    const long n = u.dim();
    double worst = 0.0;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            complex dot = 0.0;
            for (long m = 0; m < n; ++m) dot += std::conj(u(m, i)) * u(m, j);
            if (i == j) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

}  // namespace truncue
