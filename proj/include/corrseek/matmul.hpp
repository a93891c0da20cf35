#pragma once

#include <cstdint>
#include <vector>

namespace corrseek {

/// Dense row-major integer matrix with a declared magnitude bound.
/// The bound is what the overflow preconditions reason about; it is the
/// caller's promise, checked in debug builds.
struct IntMatrix {
    int64_t rows = 0;
    int64_t cols = 0;
    int64_t bound = 0;  // declared max |entry|
    std::vector<int64_t> data;

    IntMatrix() = default;
    IntMatrix(int64_t r, int64_t c, int64_t b = 0)
        : rows(r), cols(c), bound(b), data(static_cast<size_t>(r * c), 0) {}

    int64_t& at(int64_t r, int64_t c) { return data[static_cast<size_t>(r * cols + c)]; }
    int64_t at(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * cols + c)]; }

    static IntMatrix identity(int64_t n);
    IntMatrix transposed() const;
    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

/// Matrix over {-1, 0, +1}, bit-packed along rows (sign plane + presence
/// plane per row). Zero entries only ever come from padding columns.
class SignMatrix {
public:
    SignMatrix() = default;
    SignMatrix(int64_t rows, int64_t cols);

    int64_t rows() const { return rows_; }
    int64_t cols() const { return cols_; }
    int64_t words_per_row() const { return wpr_; }

    void set(int64_t r, int64_t c, int value);  // -1, 0 or +1
    int get(int64_t r, int64_t c) const;

    const uint64_t* sign_row(int64_t r) const { return sign_.data() + r * wpr_; }
    const uint64_t* present_row(int64_t r) const { return present_.data() + r * wpr_; }

private:
    int64_t rows_ = 0;
    int64_t cols_ = 0;
    int64_t wpr_ = 0;
    std::vector<uint64_t> sign_;
    std::vector<uint64_t> present_;
};

struct GemmOptions {
    int64_t tile = 64;          // cache tile edge, runtime-overridable
    bool use_strassen = false;  // identical results, demonstration only
    int64_t strassen_cutoff = 128;
};

/// Exact product of two {-1,0,+1} matrices (X a x b times Y b x c) via
/// popcount over the packed inner dimension. Entries are bounded by b.
IntMatrix gemm_pm1(const SignMatrix& x, const SignMatrix& y);

/// Same kernel with the second operand stored transposed: X (a x b) times
/// Yt (c x b) interpreted as X * Yt^T. This is the layout compression uses.
IntMatrix gemm_pm1_nt(const SignMatrix& x, const SignMatrix& yt);

/// Exact integer product, cache-blocked; optional Strassen recursion above
/// the cutoff. Throws if b * bound(X) * bound(Y) could exceed 2^62.
IntMatrix gemm_int(const IntMatrix& x, const IntMatrix& y, const GemmOptions& opts = {});

/// X (a x s) times Yt (b x s) as X * Yt^T. Same overflow precondition as
/// gemm_int.
IntMatrix gemm_int_nt(const IntMatrix& x, const IntMatrix& yt, const GemmOptions& opts = {});

/// X (s x a) times Y (s x b) as X^T * Y, accumulated as rank-1 updates over
/// the shared leading dimension so the a x b output tile stays cache-hot.
/// This is the detection product's shape.
IntMatrix gemm_int_tn(const IntMatrix& x, const IntMatrix& y, const GemmOptions& opts = {});

/// Reference triple loop, the oracle the fast kernels are tested against.
IntMatrix gemm_naive(const IntMatrix& x, const IntMatrix& y);

}  // namespace corrseek
