// Dense helpers for the per-node m x m matrices (m <= kMaxDim).  Row-major
// storage in caller-owned buffers; everything is allocation-free so the
// nodal kernels can run inside OpenMP loops.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "horolab/errors.hpp"

namespace horolab {

inline constexpr int kMaxDim = 8;

namespace smallmat {

using Buf = std::array<double, static_cast<std::size_t>(kMaxDim) * kMaxDim>;

// Determinant by Gaussian elimination with partial pivoting.
inline double det(const double* a, int m) {
    Buf w{};
    for (int i = 0; i < m * m; ++i) w[i] = a[i];
    double d = 1.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(w[r * m + col]) > std::fabs(w[piv * m + col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < m; ++c) std::swap(w[piv * m + c], w[col * m + c]);
            d = -d;
        }
        const double p = w[col * m + col];
        if (p == 0.0) return 0.0;
        d *= p;
        for (int r = col + 1; r < m; ++r) {
            const double f = w[r * m + col] / p;
            for (int c = col; c < m; ++c) w[r * m + c] -= f * w[col * m + c];
        }
    }
    return d;
}

// Inverse by Gauss-Jordan with partial pivoting.  Throws on singular input.
inline void inverse(const double* a, int m, double* out) {
    Buf w{};
    for (int i = 0; i < m * m; ++i) w[i] = a[i];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[i * m + j] = (i == j) ? 1.0 : 0.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(w[r * m + col]) > std::fabs(w[piv * m + col])) piv = r;
        if (w[piv * m + col] == 0.0) throw SolverError("smallmat::inverse: singular matrix");
        if (piv != col)
            for (int c = 0; c < m; ++c) {
                std::swap(w[piv * m + c], w[col * m + c]);
                std::swap(out[piv * m + c], out[col * m + c]);
            }
        const double p = 1.0 / w[col * m + col];
        for (int c = 0; c < m; ++c) {
            w[col * m + c] *= p;
            out[col * m + c] *= p;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = w[r * m + col];
            if (f == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                w[r * m + c] -= f * w[col * m + c];
                out[r * m + c] -= f * out[col * m + c];
            }
        }
    }
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
inline void eig_sym(const double* a, int m, double* evals) {
    Buf w{};
    for (int i = 0; i < m * m; ++i) w[i] = a[i];
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += w[p * m + q] * w[p * m + q];
        if (off < 1e-30) break;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = w[p * m + q];
                if (apq == 0.0) continue;
                const double theta = (w[q * m + q] - w[p * m + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double wkp = w[k * m + p], wkq = w[k * m + q];
                    w[k * m + p] = c * wkp - s * wkq;
                    w[k * m + q] = s * wkp + c * wkq;
                }
                for (int k = 0; k < m; ++k) {
                    const double wpk = w[p * m + k], wqk = w[q * m + k];
                    w[p * m + k] = c * wpk - s * wqk;
                    w[q * m + k] = s * wpk + c * wqk;
                }
            }
        }
    }
    for (int i = 0; i < m; ++i) evals[i] = w[i * m + i];
    for (int i = 1; i < m; ++i) {  // insertion sort, m is tiny
        const double v = evals[i];
        int j = i - 1;
        while (j >= 0 && evals[j] > v) {
            evals[j + 1] = evals[j];
            --j;
        }
        evals[j + 1] = v;
    }
}

inline double min_eig_sym(const double* a, int m) {
    std::array<double, kMaxDim> ev{};
    eig_sym(a, m, ev.data());
    return ev[0];
}

// out = a * b, all m x m.
inline void matmul(const double* a, const double* b, int m, double* out) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += a[i * m + k] * b[k * m + j];
            out[i * m + j] = s;
        }
}

}  // namespace smallmat
}  // namespace horolab
