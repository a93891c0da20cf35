#pragma once

// Independent reference implementations used as oracles. These deliberately
// avoid the packed kernels: everything goes through entry() one coordinate
// at a time.

#include <cstdint>
#include <vector>

#include "corrseek/boolmat.hpp"
#include "corrseek/corrjoin.hpp"
#include "corrseek/rng.hpp"

namespace testutil {

using corrseek::BooleanMatrix;
using corrseek::IndexTuple;
using corrseek::IterationPlan;

inline int64_t naive_inner_product(const BooleanMatrix& a, int64_t j1, const BooleanMatrix& b,
                                   int64_t j2) {
    int64_t acc = 0;
    for (int64_t i = 0; i < a.dim(); ++i) {
        acc += static_cast<int64_t>(a.entry(i, j1)) * b.entry(i, j2);
    }
    return acc;
}

inline int naive_tensor_entry(const BooleanMatrix& m, int64_t j, const IndexTuple& tuple) {
    int v = 1;
    for (uint32_t idx : tuple) v *= m.entry(idx, j);
    return v;
}

// term-by-term evaluation of the compressed-matrix definition:
// hat_{i k} = sum_{j in J_k} sign_j * (col_j^{x p})_i
inline int64_t direct_hat_entry(const BooleanMatrix& m, const IterationPlan& plan,
                                const std::vector<int8_t>& signs, int64_t row, int64_t k) {
    const IndexTuple tuple = plan.full_tuple(row);
    int64_t acc = 0;
    for (uint32_t j : plan.block(k)) {
        acc += static_cast<int64_t>(signs[j]) * naive_tensor_entry(m, j, tuple);
    }
    return acc;
}

// the detection product's defining double sum:
// sum_{j1 in J_k1} alpha_j1 sum_{j2 in J_k2} beta_j2 <a_j1^{x p}, b_j2^{x p}>_I
inline int64_t direct_output_entry(const BooleanMatrix& a, const BooleanMatrix& b,
                                   const IterationPlan& plan, int64_t k1, int64_t k2) {
    int64_t acc = 0;
    for (uint32_t j1 : plan.block(k1)) {
        for (uint32_t j2 : plan.block(k2)) {
            int64_t partial = 0;
            for (int64_t r = 0; r < plan.s; ++r) {
                const IndexTuple tuple = plan.full_tuple(r);
                partial += static_cast<int64_t>(naive_tensor_entry(a, j1, tuple)) *
                           naive_tensor_entry(b, j2, tuple);
            }
            acc += static_cast<int64_t>(plan.signs_alpha[j1]) * plan.signs_beta[j2] * partial;
        }
    }
    return acc;
}

inline BooleanMatrix random_matrix(int64_t d, int64_t n, corrseek::Rng& rng) {
    BooleanMatrix m(d, n);
    for (int64_t j = 0; j < n; ++j) {
        for (int64_t i = 0; i < d; ++i) m.set_entry(i, j, rng.next_sign());
    }
    return m;
}

}  // namespace testutil
