#pragma once

#include <algorithm>
#include <gmpxx.h>
#include <optional>
#include <vector>

namespace ddh::linalg {

using Vec = std::vector<mpq_class>;
using Mat = std::vector<Vec>;

// Gauss-Jordan over Q; returns the rank, m ends in reduced row echelon form.
inline int rref(Mat& m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        mpq_class inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return (int)r;
}

inline Mat row_basis(Mat m) {
    int rank = rref(m);
    m.resize(rank);
    return m;
}

// one solution of A x = b with free variables set to zero, if any
inline std::optional<Vec> solve(Mat a, Vec b) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (size_t i = 0; i < rows; ++i) a[i].push_back(b[i]);
    rref(a);
    Vec x(cols, 0);
    for (auto& row : a) {
        size_t p = 0;
        while (p <= cols && row[p] == 0) ++p;
        if (p == cols) return std::nullopt;  // 0 = nonzero
        if (p > cols) continue;              // zero row
        x[p] = row[cols];
    }
    return x;
}

// basis of the null space of A
inline Mat kernel(Mat a) {
    size_t cols = a.empty() ? 0 : a[0].size();
    rref(a);
    std::vector<int> pivot_of_col(cols, -1);
    int r = 0;
    for (auto& row : a) {
        size_t p = 0;
        while (p < cols && row[p] == 0) ++p;
        if (p < cols) pivot_of_col[p] = r++;
    }
    Mat null_basis;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] != -1) continue;
        Vec v(cols, 0);
        v[c] = 1;
        for (size_t cc = 0; cc < cols; ++cc)
            if (pivot_of_col[cc] != -1) v[cc] = -a[pivot_of_col[cc]][c];
        null_basis.push_back(std::move(v));
    }
    return null_basis;
}

// inverse of a square matrix, if it exists
inline std::optional<Mat> inverse(Mat a) {
    size_t n = a.size();
    for (size_t i = 0; i < n; ++i) {
        a[i].resize(2 * n, 0);
        a[i][n + i] = 1;
    }
    rref(a);
    for (size_t i = 0; i < n; ++i)
        if (a[i][i] != 1) return std::nullopt;
    Mat inv(n, Vec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

}  // namespace ddh::linalg
