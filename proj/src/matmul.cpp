#include "corrseek/matmul.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <string>

namespace corrseek {

IntMatrix IntMatrix::identity(int64_t n) {
    IntMatrix m(n, n, 1);
    for (int64_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols, rows, bound);
    for (int64_t r = 0; r < rows; ++r) {
        for (int64_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    }
    return t;
}

SignMatrix::SignMatrix(int64_t rows, int64_t cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("SignMatrix: dimensions must be positive");
    }
    rows_ = rows;
    cols_ = cols;
    wpr_ = (cols + 63) / 64;
    sign_.assign(static_cast<size_t>(rows * wpr_), 0);
    present_.assign(static_cast<size_t>(rows * wpr_), 0);
}

void SignMatrix::set(int64_t r, int64_t c, int value) {
    const uint64_t bit = 1ULL << (c % 64);
    uint64_t& sw = sign_[r * wpr_ + c / 64];
    uint64_t& pw = present_[r * wpr_ + c / 64];
    switch (value) {
        case 0:
            pw &= ~bit;
            sw &= ~bit;
            break;
        case 1:
            pw |= bit;
            sw &= ~bit;
            break;
        case -1:
            pw |= bit;
            sw |= bit;
            break;
        default:
            throw std::invalid_argument("SignMatrix::set: value must be -1, 0 or +1");
    }
}

int SignMatrix::get(int64_t r, int64_t c) const {
    const uint64_t bit = 1ULL << (c % 64);
    if (!(present_[r * wpr_ + c / 64] & bit)) return 0;
    return (sign_[r * wpr_ + c / 64] & bit) ? -1 : 1;
}

namespace {

int64_t packed_dot(const uint64_t* sx, const uint64_t* px, const uint64_t* sy,
                   const uint64_t* py, int64_t words) {
    int64_t overlap = 0;
    int64_t disagree = 0;
    for (int64_t w = 0; w < words; ++w) {
        const uint64_t both = px[w] & py[w];
        overlap += std::popcount(both);
        disagree += std::popcount((sx[w] ^ sy[w]) & both);
    }
    return overlap - 2 * disagree;
}

void check_gemm_precondition(const IntMatrix& x, const IntMatrix& y, int64_t inner) {
    const int64_t bx = std::max<int64_t>(x.bound, 1);
    const int64_t by = std::max<int64_t>(y.bound, 1);
    // inner * bx * by <= 2^62, evaluated without overflowing
    constexpr int64_t kLimit = int64_t{1} << 62;
    if (bx > kLimit / by || inner > kLimit / (bx * by)) {
        throw std::overflow_error(
            "gemm_int: potential accumulator overflow, inner=" + std::to_string(inner) +
            " bound_x=" + std::to_string(bx) + " bound_y=" + std::to_string(by));
    }
}

// each i-tile owns a disjoint set of output rows, so the tiles can run in
// parallel without changing any per-entry accumulation order
void gemm_blocked_into(const IntMatrix& x, const IntMatrix& y, IntMatrix& out, int64_t tile) {
    const int64_t a = x.rows, b = x.cols, c = y.cols;
    const int64_t tiles = (a + tile - 1) / tile;
#pragma omp parallel for schedule(dynamic)
    for (int64_t ti = 0; ti < tiles; ++ti) {
        const int64_t i0 = ti * tile;
        const int64_t i1 = std::min(i0 + tile, a);
        for (int64_t k0 = 0; k0 < b; k0 += tile) {
            const int64_t k1 = std::min(k0 + tile, b);
            for (int64_t j0 = 0; j0 < c; j0 += tile) {
                const int64_t j1 = std::min(j0 + tile, c);
                for (int64_t i = i0; i < i1; ++i) {
                    for (int64_t k = k0; k < k1; ++k) {
                        const int64_t v = x.at(i, k);
                        if (v == 0) continue;
                        const int64_t* yrow = y.data.data() + k * c;
                        int64_t* orow = out.data.data() + i * c;
                        for (int64_t j = j0; j < j1; ++j) orow[j] += v * yrow[j];
                    }
                }
            }
        }
    }
}

IntMatrix slice(const IntMatrix& m, int64_t r0, int64_t c0, int64_t rows, int64_t cols) {
    IntMatrix out(rows, cols, m.bound);
    for (int64_t r = 0; r < rows; ++r) {
        for (int64_t c = 0; c < cols; ++c) {
            if (r0 + r < m.rows && c0 + c < m.cols) out.at(r, c) = m.at(r0 + r, c0 + c);
        }
    }
    return out;
}

IntMatrix add(const IntMatrix& x, const IntMatrix& y, int64_t sign) {
    IntMatrix out(x.rows, x.cols, x.bound + y.bound);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] + sign * y.data[i];
    return out;
}

IntMatrix strassen_rec(const IntMatrix& x, const IntMatrix& y, const GemmOptions& opts,
                       int depth_left) {
    const int64_t n = x.rows;
    if (depth_left == 0 || n <= opts.strassen_cutoff || (n & 1)) {
        IntMatrix out(x.rows, y.cols, 0);
        gemm_blocked_into(x, y, out, opts.tile);
        return out;
    }
    const int64_t h = n / 2;
    const IntMatrix a11 = slice(x, 0, 0, h, h), a12 = slice(x, 0, h, h, h);
    const IntMatrix a21 = slice(x, h, 0, h, h), a22 = slice(x, h, h, h, h);
    const IntMatrix b11 = slice(y, 0, 0, h, h), b12 = slice(y, 0, h, h, h);
    const IntMatrix b21 = slice(y, h, 0, h, h), b22 = slice(y, h, h, h, h);

    const IntMatrix m1 = strassen_rec(add(a11, a22, 1), add(b11, b22, 1), opts, depth_left - 1);
    const IntMatrix m2 = strassen_rec(add(a21, a22, 1), b11, opts, depth_left - 1);
    const IntMatrix m3 = strassen_rec(a11, add(b12, b22, -1), opts, depth_left - 1);
    const IntMatrix m4 = strassen_rec(a22, add(b21, b11, -1), opts, depth_left - 1);
    const IntMatrix m5 = strassen_rec(add(a11, a12, 1), b22, opts, depth_left - 1);
    const IntMatrix m6 = strassen_rec(add(a21, a11, -1), add(b11, b12, 1), opts, depth_left - 1);
    const IntMatrix m7 = strassen_rec(add(a12, a22, -1), add(b21, b22, 1), opts, depth_left - 1);

    IntMatrix out(n, n, 0);
    for (int64_t r = 0; r < h; ++r) {
        for (int64_t c = 0; c < h; ++c) {
            const size_t i = static_cast<size_t>(r * h + c);
            out.at(r, c) = m1.data[i] + m4.data[i] - m5.data[i] + m7.data[i];
            out.at(r, c + h) = m3.data[i] + m5.data[i];
            out.at(r + h, c) = m2.data[i] + m4.data[i];
            out.at(r + h, c + h) = m1.data[i] - m2.data[i] + m3.data[i] + m6.data[i];
        }
    }
    return out;
}

}  // namespace

IntMatrix gemm_pm1(const SignMatrix& x, const SignMatrix& y) {
    if (x.cols() != y.rows()) {
        throw std::invalid_argument("gemm_pm1: inner dimensions disagree");
    }
    // repack the right operand so both stream along the inner dimension
    SignMatrix yt(y.cols(), y.rows());
    for (int64_t r = 0; r < y.rows(); ++r) {
        for (int64_t c = 0; c < y.cols(); ++c) yt.set(c, r, y.get(r, c));
    }
    return gemm_pm1_nt(x, yt);
}

IntMatrix gemm_pm1_nt(const SignMatrix& x, const SignMatrix& yt) {
    if (x.cols() != yt.cols()) {
        throw std::invalid_argument("gemm_pm1_nt: inner dimensions disagree");
    }
    const int64_t words = x.words_per_row();
    IntMatrix out(x.rows(), yt.rows(), x.cols());
    for (int64_t i = 0; i < x.rows(); ++i) {
        int64_t* orow = out.data.data() + i * out.cols;
        for (int64_t j = 0; j < yt.rows(); ++j) {
            orow[j] = packed_dot(x.sign_row(i), x.present_row(i), yt.sign_row(j),
                                 yt.present_row(j), words);
        }
    }
    return out;
}

IntMatrix gemm_int(const IntMatrix& x, const IntMatrix& y, const GemmOptions& opts) {
    if (x.cols != y.rows) {
        throw std::invalid_argument("gemm_int: inner dimensions disagree");
    }
    check_gemm_precondition(x, y, x.cols);
    const int64_t product_bound = x.cols * std::max<int64_t>(x.bound, 1) * std::max<int64_t>(y.bound, 1);

    if (opts.use_strassen && x.rows == x.cols && y.rows == y.cols &&
        x.rows > opts.strassen_cutoff) {
        // each recursion level doubles operand magnitudes, so products gain
        // a factor 4 per level; cap the depth so 2^62 still holds
        int depth = 0;
        int64_t headroom = (int64_t{1} << 62) / std::max<int64_t>(product_bound, 1);
        while (headroom >= 4 && depth < 40) {
            headroom /= 4;
            ++depth;
        }
        IntMatrix out = strassen_rec(x, y, opts, depth);
        out.bound = product_bound;
        return out;
    }

    IntMatrix out(x.rows, y.cols, product_bound);
    gemm_blocked_into(x, y, out, opts.tile);
    return out;
}

IntMatrix gemm_int_nt(const IntMatrix& x, const IntMatrix& yt, const GemmOptions& opts) {
    if (x.cols != yt.cols) {
        throw std::invalid_argument("gemm_int_nt: inner dimensions disagree");
    }
    check_gemm_precondition(x, yt, x.cols);
    const int64_t s = x.cols;
    IntMatrix out(x.rows, yt.rows,
                  s * std::max<int64_t>(x.bound, 1) * std::max<int64_t>(yt.bound, 1));
    const int64_t tile = std::max<int64_t>(opts.tile, 1);
    for (int64_t i0 = 0; i0 < x.rows; i0 += tile) {
        const int64_t i1 = std::min(i0 + tile, x.rows);
        for (int64_t j0 = 0; j0 < yt.rows; j0 += tile) {
            const int64_t j1 = std::min(j0 + tile, yt.rows);
            for (int64_t i = i0; i < i1; ++i) {
                const int64_t* xrow = x.data.data() + i * s;
                int64_t* orow = out.data.data() + i * out.cols;
                for (int64_t j = j0; j < j1; ++j) {
                    const int64_t* yrow = yt.data.data() + j * s;
                    int64_t acc = 0;
                    for (int64_t k = 0; k < s; ++k) acc += xrow[k] * yrow[k];
                    orow[j] = acc;
                }
            }
        }
    }
    return out;
}

IntMatrix gemm_int_tn(const IntMatrix& x, const IntMatrix& y, const GemmOptions& opts) {
    if (x.rows != y.rows) {
        throw std::invalid_argument("gemm_int_tn: leading dimensions disagree");
    }
    check_gemm_precondition(x, y, x.rows);
    const int64_t s = x.rows, a = x.cols, b = y.cols;
    IntMatrix out(a, b, s * std::max<int64_t>(x.bound, 1) * std::max<int64_t>(y.bound, 1));
    const int64_t tile = std::max<int64_t>(opts.tile, 1);
    // column stripes own disjoint output entries and keep the same per-entry
    // accumulation order, so the parallel result is identical to the serial one
    const int64_t stripes = (b + tile - 1) / tile;
#pragma omp parallel for schedule(static)
    for (int64_t sj = 0; sj < stripes; ++sj) {
        const int64_t j0 = sj * tile;
        const int64_t j1 = std::min(j0 + tile, b);
        for (int64_t i0 = 0; i0 < a; i0 += tile) {
            const int64_t i1 = std::min(i0 + tile, a);
            for (int64_t k = 0; k < s; ++k) {
                const int64_t* xrow = x.data.data() + k * a;
                const int64_t* yrow = y.data.data() + k * b;
                for (int64_t i = i0; i < i1; ++i) {
                    const int64_t v = xrow[i];
                    if (v == 0) continue;
                    int64_t* orow = out.data.data() + i * b;
                    for (int64_t j = j0; j < j1; ++j) orow[j] += v * yrow[j];
                }
            }
        }
    }
    return out;
}

IntMatrix gemm_naive(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) {
        throw std::invalid_argument("gemm_naive: inner dimensions disagree");
    }
    IntMatrix out(x.rows, y.cols,
                  x.cols * std::max<int64_t>(x.bound, 1) * std::max<int64_t>(y.bound, 1));
    for (int64_t i = 0; i < x.rows; ++i) {
        for (int64_t j = 0; j < y.cols; ++j) {
            int64_t acc = 0;
            for (int64_t k = 0; k < x.cols; ++k) acc += x.at(i, k) * y.at(k, j);
            out.at(i, j) = acc;
        }
    }
    return out;
}

}  // namespace corrseek
