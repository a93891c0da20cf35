#include "corrseek/boolmat.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace corrseek {

BooleanMatrix::BooleanMatrix(int64_t d, int64_t n) {
    if (d < 1 || n < 1) {
        throw std::invalid_argument("BooleanMatrix: d and n must be positive");
    }
    d_ = d;
    n_ = n;
    n_padded_ = n;
    wpc_ = (d + 63) / 64;
    sign_.assign(static_cast<size_t>(n * wpc_), 0);
    present_.assign(static_cast<size_t>(n * wpc_), 0);
    // mark every coordinate of every logical column present
    const int tail = static_cast<int>(d % 64);
    const uint64_t tail_mask = tail == 0 ? ~0ULL : ((1ULL << tail) - 1);
    for (int64_t j = 0; j < n; ++j) {
        uint64_t* pres = present_.data() + j * wpc_;
        for (int64_t w = 0; w < wpc_; ++w) pres[w] = ~0ULL;
        pres[wpc_ - 1] = tail_mask;
    }
}

void BooleanMatrix::set_entry(int64_t i, int64_t j, int value) {
    if (i < 0 || i >= d_ || j < 0 || j >= n_) {
        throw std::out_of_range("BooleanMatrix::set_entry: index out of range");
    }
    if (value != 1 && value != -1) {
        throw std::invalid_argument("BooleanMatrix::set_entry: value must be +1 or -1");
    }
    uint64_t& word = sign_[j * wpc_ + i / 64];
    const uint64_t bit = 1ULL << (i % 64);
    if (value == -1) {
        word |= bit;
    } else {
        word &= ~bit;
    }
}

int BooleanMatrix::entry(int64_t i, int64_t j) const {
    if (i < 0 || i >= d_ || j < 0 || j >= n_padded_) {
        throw std::out_of_range("BooleanMatrix::entry: index out of range");
    }
    const uint64_t bit = 1ULL << (i % 64);
    if (!(present_[j * wpc_ + i / 64] & bit)) return 0;
    return (sign_[j * wpc_ + i / 64] & bit) ? -1 : 1;
}

int64_t inner_product(const ColumnView& x, const ColumnView& y) {
    if (x.d != y.d) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    int64_t overlap = 0;
    int64_t disagree = 0;
    for (int64_t w = 0; w < x.words; ++w) {
        const uint64_t both = x.present[w] & y.present[w];
        overlap += std::popcount(both);
        disagree += std::popcount((x.sign[w] ^ y.sign[w]) & both);
    }
    return overlap - 2 * disagree;
}

int64_t hamming_distance(const ColumnView& x, const ColumnView& y) {
    if (x.d != y.d) {
        throw std::invalid_argument("hamming_distance: dimension mismatch");
    }
    int64_t disagree = 0;
    for (int64_t w = 0; w < x.words; ++w) {
        disagree += std::popcount((x.sign[w] ^ y.sign[w]) & x.present[w] & y.present[w]);
    }
    return disagree;
}

int tensor_entry(const ColumnView& x, const IndexTuple& tuple) {
    uint64_t parity = 0;
    for (uint32_t idx : tuple) {
        if (idx >= static_cast<uint64_t>(x.d)) {
            throw std::out_of_range("tensor_entry: tuple index " + std::to_string(idx) +
                                    " out of range for d=" + std::to_string(x.d));
        }
        const uint64_t bit = 1ULL << (idx % 64);
        if (!(x.present[idx / 64] & bit)) return 0;
        parity ^= (x.sign[idx / 64] & bit) ? 1 : 0;
    }
    return parity ? -1 : 1;
}

int64_t partial_inner_product(const ColumnView& x, const ColumnView& y,
                              const std::vector<IndexTuple>& tuples) {
    if (!tuples.empty()) {
        const size_t p = tuples.front().size();
        for (const IndexTuple& t : tuples) {
            if (t.size() != p) {
                throw std::invalid_argument("partial_inner_product: mixed tuple lengths");
            }
        }
    }
    int64_t sum = 0;
    for (const IndexTuple& t : tuples) {
        sum += static_cast<int64_t>(tensor_entry(x, t)) * tensor_entry(y, t);
    }
    return sum;
}

BooleanMatrix pad_to_multiple(const BooleanMatrix& m, int64_t t) {
    if (t < 1) {
        throw std::invalid_argument("pad_to_multiple: t must be >= 1");
    }
    BooleanMatrix out = m;
    const int64_t target = ((m.n_ + t - 1) / t) * t;
    if (target == m.n_padded_) return out;
    out.n_padded_ = target;
    out.sign_.resize(static_cast<size_t>(target * m.wpc_), 0);
    out.present_.resize(static_cast<size_t>(target * m.wpc_), 0);
    return out;
}

}  // namespace corrseek
