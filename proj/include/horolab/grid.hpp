// Uniform Cartesian grid in m dimensions with row-major node storage and
// the centered / one-sided difference stencils used by the field kernels.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "horolab/errors.hpp"
#include "horolab/exec.hpp"
#include "horolab/smallmat.hpp"

namespace horolab {

using ScalarField = std::vector<double>;
using Index = std::array<int, kMaxDim>;

struct GridDomain {
    int m = 0;
    std::vector<double> origin;      // size m
    double spacing = 0.0;            // uniform, all axes
    std::vector<int> shape;          // nodes per axis, each >= 3
    std::vector<std::size_t> stride; // row-major, stride[m-1] == 1
    std::size_t n = 0;               // total nodes

    static GridDomain make(std::vector<double> origin, double spacing, std::vector<int> shape) {
        GridDomain d;
        d.m = static_cast<int>(shape.size());
        if (d.m < 1 || d.m > kMaxDim)
            throw DimensionError("GridDomain: dimension must be in [1, " +
                                 std::to_string(kMaxDim) + "]");
        if (origin.size() != shape.size())
            throw DimensionError("GridDomain: origin/shape length mismatch");
        if (!(spacing > 0.0)) throw DomainError("GridDomain: spacing must be positive");
        for (int s : shape)
            if (s < 3) throw DimensionError("GridDomain: every axis needs >= 3 nodes");
        d.origin = std::move(origin);
        d.spacing = spacing;
        d.shape = std::move(shape);
        d.stride.assign(d.m, 1);
        for (int a = d.m - 2; a >= 0; --a)
            d.stride[a] = d.stride[a + 1] * static_cast<std::size_t>(d.shape[a + 1]);
        d.n = d.stride[0] * static_cast<std::size_t>(d.shape[0]);
        return d;
    }

    // Square grid on [-half, half]^m with `nodes` nodes per axis.
    static GridDomain centered(double half, int nodes, int m) {
        if (nodes < 3) throw DimensionError("GridDomain: every axis needs >= 3 nodes");
        std::vector<double> org(m, -half);
        return make(std::move(org), 2.0 * half / (nodes - 1), std::vector<int>(m, nodes));
    }

    std::size_t flat(const int* idx) const {
        std::size_t f = 0;
        for (int a = 0; a < m; ++a) f += static_cast<std::size_t>(idx[a]) * stride[a];
        return f;
    }
    void unflatten(std::size_t f, int* idx) const {
        for (int a = 0; a < m; ++a) {
            idx[a] = static_cast<int>(f / stride[a]);
            f %= stride[a];
        }
    }
    double coord(int axis, int i) const { return origin[axis] + spacing * i; }
    void coords(const int* idx, double* x) const {
        for (int a = 0; a < m; ++a) x[a] = coord(a, idx[a]);
    }
    // depth = number of rings from the boundary; depth(boundary node) == 0.
    int depth(const int* idx) const {
        int d = shape[0];
        for (int a = 0; a < m; ++a) {
            const int da = std::min(idx[a], shape[a] - 1 - idx[a]);
            if (da < d) d = da;
        }
        return d;
    }
    bool interior(const int* idx) const { return depth(idx) >= 1; }

    bool same_layout(const GridDomain& o) const {
        return m == o.m && shape == o.shape && spacing == o.spacing && origin == o.origin;
    }
};

// Iterate the box of nodes at least `min_depth` rings from the boundary.
// fn(flat, idx) with idx.size() == m.
template <typename Fn>
inline void for_each_at_depth(const GridDomain& dom, int min_depth, Exec exec, Fn&& fn) {
    const int m = dom.m;
    std::size_t total = 1;
    std::array<int, kMaxDim> len{};
    for (int a = 0; a < m; ++a) {
        len[a] = dom.shape[a] - 2 * min_depth;
        if (len[a] <= 0) return;
        total *= static_cast<std::size_t>(len[a]);
    }
    parallel_for(total, exec, [&](std::size_t t) {
        Index idx{};
        std::size_t rem = t;
        for (int a = m - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(len[a])) + min_depth;
            rem /= static_cast<std::size_t>(len[a]);
        }
        fn(dom.flat(idx.data()), idx);
    });
}

template <typename Fn>
inline void for_each_node(const GridDomain& dom, Exec exec, Fn&& fn) {
    for_each_at_depth(dom, 0, exec, fn);
}

// Count of nodes at depth >= d.
inline std::size_t count_at_depth(const GridDomain& dom, int d) {
    std::size_t total = 1;
    for (int a = 0; a < dom.m; ++a) {
        const int len = dom.shape[a] - 2 * d;
        if (len <= 0) return 0;
        total *= static_cast<std::size_t>(len);
    }
    return total;
}

// ---- finite differences -------------------------------------------------
//
// All stencils are second order.  Centered versions assume the required
// neighbors exist; grad_at falls back to 3-point one-sided stencils on
// boundary nodes so first-derivative fields extend to the whole grid.

inline double d1_centered(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (v[f + s] - v[f - s]) / (2.0 * h);
}
inline double d1_forward3(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (-3.0 * v[f] + 4.0 * v[f + s] - v[f + 2 * s]) / (2.0 * h);
}
inline double d1_backward3(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (3.0 * v[f] - 4.0 * v[f - s] + v[f - 2 * s]) / (2.0 * h);
}
// third-order one-sided first derivatives, so first-derivative fields on
// the boundary ring stay an order ahead of the centered interior values
inline double d1_forward4(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (-11.0 * v[f] + 18.0 * v[f + s] - 9.0 * v[f + 2 * s] + 2.0 * v[f + 3 * s]) /
           (6.0 * h);
}
inline double d1_backward4(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (11.0 * v[f] - 18.0 * v[f - s] + 9.0 * v[f - 2 * s] - 2.0 * v[f - 3 * s]) /
           (6.0 * h);
}
inline double d2_axis(const ScalarField& v, std::size_t f, std::size_t s, double h) {
    return (v[f + s] - 2.0 * v[f] + v[f - s]) / (h * h);
}
inline double d2_mixed(const ScalarField& v, std::size_t f, std::size_t sa, std::size_t sb,
                       double h) {
    return (v[f + sa + sb] - v[f + sa - sb] - v[f - sa + sb] + v[f - sa - sb]) /
           (4.0 * h * h);
}

// First derivative of a derived (interior-consistent) field at an interior
// node: centered when both neighbors are interior, otherwise a one-sided
// stencil shifted into the interior so boundary-ring values never enter.
inline double d1_interior(const ScalarField& v, const GridDomain& dom, std::size_t f,
                          const int* idx, int a) {
    const double h = dom.spacing;
    const std::size_t s = dom.stride[a];
    if (idx[a] == 1 && dom.shape[a] >= 5) return d1_forward3(v, f, s, h);
    if (idx[a] == dom.shape[a] - 2 && dom.shape[a] >= 5) return d1_backward3(v, f, s, h);
    return d1_centered(v, f, s, h);
}

// Gradient valid at every node: centered in the interior, one-sided on the
// boundary rings.
inline void grad_at(const ScalarField& v, const GridDomain& dom, std::size_t f, const int* idx,
                    double* out) {
    const double h = dom.spacing;
    for (int a = 0; a < dom.m; ++a) {
        const std::size_t s = dom.stride[a];
        if (idx[a] == 0)
            out[a] = dom.shape[a] >= 4 ? d1_forward4(v, f, s, h) : d1_forward3(v, f, s, h);
        else if (idx[a] == dom.shape[a] - 1)
            out[a] = dom.shape[a] >= 4 ? d1_backward4(v, f, s, h) : d1_backward3(v, f, s, h);
        else
            out[a] = d1_centered(v, f, s, h);
    }
}

// Hessian (all second partials) at an interior node.
inline void hessian_at(const ScalarField& v, const GridDomain& dom, std::size_t f, double* out) {
    const double h = dom.spacing;
    for (int a = 0; a < dom.m; ++a) {
        out[a * dom.m + a] = d2_axis(v, f, dom.stride[a], h);
        for (int b = a + 1; b < dom.m; ++b) {
            const double mixed = d2_mixed(v, f, dom.stride[a], dom.stride[b], h);
            out[a * dom.m + b] = mixed;
            out[b * dom.m + a] = mixed;
        }
    }
}

inline double max_abs_at_depth(const ScalarField& v, const GridDomain& dom, int min_depth,
                               Exec exec) {
    double mx = 0.0;
    // reuse the max reduction over the depth box via a flat traversal
    const int m = dom.m;
    std::size_t total = 1;
    std::array<int, kMaxDim> len{};
    for (int a = 0; a < m; ++a) {
        len[a] = dom.shape[a] - 2 * min_depth;
        if (len[a] <= 0) return 0.0;
        total *= static_cast<std::size_t>(len[a]);
    }
    mx = parallel_max(total, exec, [&](std::size_t t) {
        Index idx{};
        std::size_t rem = t;
        for (int a = m - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(len[a])) + min_depth;
            rem /= static_cast<std::size_t>(len[a]);
        }
        const double val = v[dom.flat(idx.data())];
        return val < 0.0 ? -val : val;
    });
    return mx < 0.0 ? 0.0 : mx;
}

}  // namespace horolab
