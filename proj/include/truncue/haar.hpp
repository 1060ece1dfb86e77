#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "truncue/complex_matrix.hpp"

namespace truncue {

// Matrix of i.i.d. complex Gaussians; real and imaginary parts are
// independent standard normals (unit variance per component — the scale
// cancels in the QR step anyway, this fixes the convention).
inline complex_matrix sample_complex_ginibre(long n, std::mt19937_64& rng) {
    complex_matrix g(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = complex(re, im);
        }
    }
    return g;
}

// Haar-distributed unitary: QR-factor a Ginibre draw by Householder
// reflectors, then absorb the phases of R's diagonal into Q (equivalently,
// force R's diagonal positive), which removes the factorization ambiguity
// that would otherwise bias the distribution.
inline complex_matrix haar_unitary(long n, std::mt19937_64& rng) {
    detail::require(n >= 1, "haar_unitary: requires n >= 1");
    std::vector<complex> v(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 4; ++attempt) {
        complex_matrix r = sample_complex_ginibre(n, rng);
        complex_matrix q = complex_matrix::identity(n);
        bool degenerate = false;
        for (long col = 0; col < n; ++col) {
            double norm_sq = 0.0;
            for (long i = col; i < n; ++i) norm_sq += std::norm(r(i, col));
            const double col_norm = std::sqrt(norm_sq);
            if (col_norm <= 1e-12) {
                degenerate = true;
                break;
            }
            const complex x1 = r(col, col);
            const complex phase = x1 == complex(0.0) ? complex(1.0) : x1 / std::abs(x1);
            const double beta = 1.0 / (col_norm * (col_norm + std::abs(x1)));
            const long len = n - col;
            v[0] = x1 + phase * col_norm;
            for (long i = 1; i < len; ++i) v[static_cast<std::size_t>(i)] = r(col + i, col);

            for (long c = col + 1; c < n; ++c) {
                complex w = 0.0;
                for (long i = 0; i < len; ++i)
                    w += std::conj(v[static_cast<std::size_t>(i)]) * r(col + i, c);
                w *= beta;
                for (long i = 0; i < len; ++i) r(col + i, c) -= v[static_cast<std::size_t>(i)] * w;
            }
            r(col, col) = -phase * col_norm;
            for (long i = col + 1; i < n; ++i) r(i, col) = 0.0;

            for (long row = 0; row < n; ++row) {
                complex w = 0.0;
                for (long i = 0; i < len; ++i) w += q(row, col + i) * v[static_cast<std::size_t>(i)];
                w *= beta;
                for (long i = 0; i < len; ++i)
                    q(row, col + i) -= w * std::conj(v[static_cast<std::size_t>(i)]);
            }
        }
        if (degenerate) continue;
        for (long col = 0; col < n; ++col) {
            const complex d = r(col, col);
            const complex ph = d / std::abs(d);
            for (long row = 0; row < n; ++row) q(row, col) *= ph;
        }
        return q;
    }
    throw std::runtime_error("haar_unitary: degenerate QR diagonal after 3 retries");
}

// Leading p x p block.
inline complex_matrix truncate(const complex_matrix& u, long p) {
    detail::require(p >= 1 && p < u.dim(), "truncate: requires 1 <= p < dim");
    complex_matrix a(p);
    for (long i = 0; i < p; ++i)
        for (long j = 0; j < p; ++j) a(i, j) = u(i, j);
    return a;
}

}  // namespace truncue
