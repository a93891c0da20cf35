#pragma once

#include <cstdint>
#include <vector>

namespace corrseek {

/// Ordered tuple of row indices (0-based, each < d).
using IndexTuple = std::vector<uint32_t>;

/// Read-only view of one packed column: sign plane + presence plane.
/// Sign bit set means the entry is -1; presence bit clear means the entry
/// is a padding 0.
struct ColumnView {
    const uint64_t* sign;
    const uint64_t* present;
    int64_t d;
    int64_t words;
};

/// d x n collection of {-1,+1} columns, bit-packed column-major in 64-bit
/// words. Columns appended by padding are all-zero (presence bits clear) so
/// they have zero inner product with everything.
class BooleanMatrix {
public:
    BooleanMatrix() = default;

    /// All entries +1, all columns present.
    BooleanMatrix(int64_t d, int64_t n);

    int64_t dim() const { return d_; }
    int64_t cols() const { return n_; }
    int64_t padded_cols() const { return n_padded_; }
    int64_t words_per_col() const { return wpc_; }
    bool is_padding(int64_t j) const { return j >= n_; }

    /// value must be -1 or +1; only logical columns are writable.
    void set_entry(int64_t i, int64_t j, int value);

    /// -1, 0 (padding) or +1.
    int entry(int64_t i, int64_t j) const;

    ColumnView col(int64_t j) const {
        return ColumnView{sign_.data() + j * wpc_, present_.data() + j * wpc_, d_, wpc_};
    }

    const std::vector<uint64_t>& sign_words() const { return sign_; }
    const std::vector<uint64_t>& present_words() const { return present_; }
    uint64_t* raw_sign(int64_t j) { return sign_.data() + j * wpc_; }
    uint64_t* raw_present(int64_t j) { return present_.data() + j * wpc_; }

    bool operator==(const BooleanMatrix& o) const = default;

    friend BooleanMatrix pad_to_multiple(const BooleanMatrix& m, int64_t t);

private:
    int64_t d_ = 0;
    int64_t n_ = 0;
    int64_t n_padded_ = 0;
    int64_t wpc_ = 0;
    std::vector<uint64_t> sign_;
    std::vector<uint64_t> present_;
};

/// Sum_i x_i y_i over mutually present coordinates; padding contributes 0.
int64_t inner_product(const ColumnView& x, const ColumnView& y);

/// Number of disagreements among mutually present coordinates.
int64_t hamming_distance(const ColumnView& x, const ColumnView& y);

/// (x^{\otimes p})_tuple = prod_l x_{tuple_l}; 0 as soon as one coordinate is padding.
int tensor_entry(const ColumnView& x, const IndexTuple& tuple);

/// Sum over the tuple multiset of the products of tensor entries of x and y,
/// counting multiplicity. All tuples must share one length.
int64_t partial_inner_product(const ColumnView& x, const ColumnView& y,
                              const std::vector<IndexTuple>& tuples);

/// Append all-zero columns until the physical column count is the least
/// multiple of t that is >= n. Logical columns are untouched.
BooleanMatrix pad_to_multiple(const BooleanMatrix& m, int64_t t);

}  // namespace corrseek
