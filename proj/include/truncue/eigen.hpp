#pragma once

#include <stdexcept>
#include <vector>

#include "truncue/complex_matrix.hpp"

namespace truncue {

namespace detail {

// Unitary similarity reduction to upper Hessenberg form by complex
// Householder reflectors P = I - beta v v*.
inline void hessenberg_reduce(complex_matrix& h) {
    const long n = h.dim();
    std::vector<complex> v(static_cast<std::size_t>(n));
    for (long col = 0; col + 2 < n; ++col) {
        double norm_sq = 0.0;
        for (long i = col + 1; i < n; ++i) norm_sq += std::norm(h(i, col));
        const double col_norm = std::sqrt(norm_sq);
        if (col_norm == 0.0) continue;
        const complex x1 = h(col + 1, col);
        const complex phase = x1 == complex(0.0) ? complex(1.0) : x1 / std::abs(x1);
        const double beta = 1.0 / (col_norm * (col_norm + std::abs(x1)));
        const long len = n - col - 1;
        v[0] = x1 + phase * col_norm;
        for (long i = 1; i < len; ++i) v[static_cast<std::size_t>(i)] = h(col + 1 + i, col);

        // Left application to columns right of the one being annihilated.
        for (long c = col + 1; c < n; ++c) {
            complex w = 0.0;
            for (long i = 0; i < len; ++i)
                w += std::conj(v[static_cast<std::size_t>(i)]) * h(col + 1 + i, c);
            w *= beta;
            for (long i = 0; i < len; ++i) h(col + 1 + i, c) -= v[static_cast<std::size_t>(i)] * w;
        }
        h(col + 1, col) = -phase * col_norm;
        for (long i = col + 2; i < n; ++i) h(i, col) = 0.0;

        // Right application to every row.
        for (long r = 0; r < n; ++r) {
            complex w = 0.0;
            for (long i = 0; i < len; ++i) w += h(r, col + 1 + i) * v[static_cast<std::size_t>(i)];
            w *= beta;
            for (long i = 0; i < len; ++i)
                h(r, col + 1 + i) -= w * std::conj(v[static_cast<std::size_t>(i)]);
        }
    }
}

// Eigenvalues of [[a, b], [c, d]]: the larger root of the characteristic
// quadratic by magnitude, then its partner from the determinant.
inline std::pair<complex, complex> eigenvalues_2x2(complex a, complex b, complex c, complex d) {
    const complex mean = 0.5 * (a + d);
    const complex det = a * d - b * c;
    const complex disc = std::sqrt(mean * mean - det);
    const complex big = std::abs(mean + disc) >= std::abs(mean - disc) ? mean + disc : mean - disc;
    if (big == complex(0.0)) return {complex(0.0), complex(0.0)};
    return {big, det / big};
}

// Eigenvalue of the trailing 2x2 block closest to the corner entry.
inline complex wilkinson_shift(const complex_matrix& h, long en) {
    const auto [l1, l2] =
        eigenvalues_2x2(h(en - 1, en - 1), h(en - 1, en), h(en, en - 1), h(en, en));
    return std::abs(l1 - h(en, en)) <= std::abs(l2 - h(en, en)) ? l1 : l2;
}

// One explicit single-shift QR sweep on the active window [l, en]: factor
// H - sI by Givens rotations, reassemble as RQ + sI.
inline void qr_sweep(complex_matrix& h, long l, long en, complex shift) {
    for (long i = l; i <= en; ++i) h(i, i) -= shift;

    std::vector<double> cs(static_cast<std::size_t>(en - l));
    std::vector<complex> sn(static_cast<std::size_t>(en - l));
    for (long i = l; i < en; ++i) {
        const complex a = h(i, i);
        const complex b = h(i + 1, i);
        const double r = std::sqrt(std::norm(a) + std::norm(b));
        double c;
        complex s;
        if (r == 0.0) {
            c = 1.0;
            s = 0.0;
        } else if (a == complex(0.0)) {
            c = 0.0;
            s = 1.0;
        } else {
            c = std::abs(a) / r;
            s = (a / std::abs(a)) * std::conj(b) / r;
        }
        cs[static_cast<std::size_t>(i - l)] = c;
        sn[static_cast<std::size_t>(i - l)] = s;
        for (long j = i; j <= en; ++j) {
            const complex x = h(i, j);
            const complex y = h(i + 1, j);
            h(i, j) = c * x + s * y;
            h(i + 1, j) = -std::conj(s) * x + c * y;
        }
    }
    for (long i = l; i < en; ++i) {
        const double c = cs[static_cast<std::size_t>(i - l)];
        const complex s = sn[static_cast<std::size_t>(i - l)];
        for (long j = l; j <= i + 1; ++j) {
            const complex x = h(j, i);
            const complex y = h(j, i + 1);
            h(j, i) = c * x + std::conj(s) * y;
            h(j, i + 1) = -s * x + c * y;
        }
    }

    for (long i = l; i <= en; ++i) h(i, i) += shift;
}

}  // namespace detail

// All eigenvalues of a general complex matrix: Householder reduction to upper
// Hessenberg, then single-shift QR iteration with deflation at
// |h_{i,i-1}| <= 1e-14 (|h_{i-1,i-1}| + |h_{i,i}|). Non-convergence within
// 100 * dim sweeps is reported, never returned as garbage.
inline std::vector<complex> eigenvalues(const complex_matrix& m) {
    detail::require(m.finite(), "eigenvalues: requires finite entries");
    const long n = m.dim();
    std::vector<complex> eig;
    eig.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        eig.push_back(m(0, 0));
        return eig;
    }

    complex_matrix h = m;
    detail::hessenberg_reduce(h);

    long en = n - 1;
    long sweeps = 0;
    long stalled = 0;
    const long cap = 100 * n;
    while (en >= 0) {
        long l = en;
        while (l > 0) {
            double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (scale == 0.0) scale = 1.0;
            if (std::abs(h(l, l - 1)) <= 1e-14 * scale) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == en) {
            eig.push_back(h(en, en));
            --en;
            stalled = 0;
            continue;
        }
        if (l == en - 1) {
            const auto [l1, l2] =
                detail::eigenvalues_2x2(h(l, l), h(l, en), h(en, l), h(en, en));
            eig.push_back(l1);
            eig.push_back(l2);
            en -= 2;
            stalled = 0;
            continue;
        }
        if (sweeps >= cap)
            throw std::runtime_error("eigenvalues: QR iteration exceeded 100 * dim sweeps");
        ++sweeps;
        ++stalled;
        // Once in a while a stalled window gets a real exceptional shift to
        // break symmetry; otherwise shift by the Wilkinson choice.
        const complex shift =
            stalled % 10 == 0
                ? complex(std::abs(h(en, en - 1)) + std::abs(h(en - 1, en - 2)), 0.0)
                : detail::wilkinson_shift(h, en);
        detail::qr_sweep(h, l, en, shift);
    }
    return eig;
}

inline double spectral_radius(const complex_matrix& m) {
    double radius = 0.0;
    for (const complex& z : eigenvalues(m)) radius = std::max(radius, std::abs(z));
    return radius;
}

}  // namespace truncue
