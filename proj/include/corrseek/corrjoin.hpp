#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "corrseek/boolmat.hpp"
#include "corrseek/matmul.hpp"
#include "corrseek/params.hpp"

namespace corrseek {

/// One iteration's randomness: block partition of the padded columns, the
/// two half-length tuple multisets, and the aggregation signs. Fully
/// determined by (seed, iteration), independent of worker scheduling.
struct IterationPlan {
    int64_t n_padded = 0;
    int64_t d = 0;
    int64_t t = 0;
    int64_t p = 0;
    int64_t s = 0;
    uint64_t seed = 0;
    std::vector<uint32_t> order;             // permutation; block k = order[k*t .. k*t+t)
    std::vector<IndexTuple> sample_left;     // I1: sqrt(s) tuples of length p/2
    std::vector<IndexTuple> sample_right;    // I2
    std::vector<int8_t> signs_alpha;         // per padded column
    std::vector<int8_t> signs_beta;

    int64_t block_count() const { return n_padded / t; }
    std::span<const uint32_t> block(int64_t k) const {
        return {order.data() + k * t, static_cast<size_t>(t)};
    }
    /// Full p-tuple for sample row index r = u * sqrt(s) + v.
    IndexTuple full_tuple(int64_t r) const;
};

/// hatA or hatB: logically s x (n/t), stored row-major (tuple index major)
/// so the detection product reduces to cache-friendly rank-1 updates.
struct CompressedMatrix {
    int64_t s = 0;
    int64_t blocks = 0;
    uint64_t plan_seed = 0;
    IntMatrix values;  // s x blocks

    int64_t value(int64_t i, int64_t k) const { return values.at(i, k); }
};

struct MarkedPair {
    int64_t k1 = 0;
    int64_t k2 = 0;
    int64_t score = 0;  // |(hatA^T hatB)_{k1 k2}|
};

struct OutlierPair {
    int64_t j1 = 0;
    int64_t j2 = 0;
    int64_t ip = 0;

    friend bool operator<(const OutlierPair& a, const OutlierPair& b) {
        if (a.j1 != b.j1) return a.j1 < b.j1;
        return a.j2 < b.j2;
    }
    friend bool operator==(const OutlierPair& a, const OutlierPair& b) {
        return a.j1 == b.j1 && a.j2 == b.j2 && a.ip == b.ip;
    }
};

/// Thrown when one iteration marks more block pairs than mark_cap; listing
/// everything would silently degrade to the quadratic scan.
class MarkCapExceeded : public std::runtime_error {
public:
    MarkCapExceeded(int64_t marks, int64_t cap, int64_t iteration)
        : std::runtime_error("mark cap exceeded: " + std::to_string(marks) + " marks > cap " +
                             std::to_string(cap) + " in iteration " + std::to_string(iteration)),
          marks(marks),
          cap(cap),
          iteration(iteration) {}
    int64_t marks, cap, iteration;
};

struct DetectionReport {
    std::vector<OutlierPair> pairs;
    std::vector<int64_t> iteration_marks;
    bool any_marked = false;

    int64_t total_marks() const {
        int64_t total = 0;
        for (int64_t m : iteration_marks) total += m;
        return total;
    }
};

/// Phase 0. Requires t | n_padded, s a perfect square, p even.
IterationPlan setup_iteration(int64_t n_padded, int64_t d, const Parameters& params,
                              uint64_t seed);

/// Phases 1+2: per block k, build L_k and R_k from half tensor powers and
/// multiply; column k of the result is the signed block aggregate of the
/// sampled p-th tensor power coordinates.
CompressedMatrix compress(const BooleanMatrix& m, const IterationPlan& plan,
                          std::span<const int8_t> signs);

/// Phase 3: one product hatA^T hatB; returns every (k1,k2) whose entry has
/// absolute value >= threshold_constant * rho^p * s.
std::vector<MarkedPair> detect(const CompressedMatrix& hat_a, const CompressedMatrix& hat_b,
                               const Parameters& params);

/// Phase 4: exact inner products inside each marked block pair, keeping
/// |ip| >= rho*d; deduplicated, sorted by (j1, j2). Padding columns skipped.
std::vector<OutlierPair> list_outliers(const BooleanMatrix& a, const BooleanMatrix& b,
                                       const IterationPlan& plan,
                                       const std::vector<MarkedPair>& marked, double rho);

/// The full iterated pipeline; union of the iterations' listings.
/// Soundness is unconditional: every returned pair is re-verified exactly.
DetectionReport find_outliers(const BooleanMatrix& a, const BooleanMatrix& b,
                              const Parameters& params, uint64_t seed);

/// Same phases with listing suppressed (the approximate decision variant);
/// pairs stays empty, any_marked and the per-iteration counts are filled.
DetectionReport run_detection(const BooleanMatrix& a, const BooleanMatrix& b,
                              const Parameters& params, uint64_t seed, bool listing);

/// Two-level variant: each marked block pair becomes a sub-instance that is
/// detected again with block size derived from t^kappa before listing.
DetectionReport find_outliers_two_level(const BooleanMatrix& a, const BooleanMatrix& b,
                                        const Parameters& params, double kappa, uint64_t seed);

/// One bit-split instance of the monochromatic-to-bichromatic reduction.
struct SplitInstance {
    BooleanMatrix a;
    BooleanMatrix b;
    std::vector<int64_t> a_index;  // column -> original index
    std::vector<int64_t> b_index;
};

/// ceil(log2 n) bichromatic instances splitting columns by index bit; every
/// pair of distinct columns lands in at least one instance.
std::vector<SplitInstance> reduce_monochromatic(const BooleanMatrix& data);

/// Convenience: reduction + bichromatic runs + union mapped back to original
/// indices, as unordered pairs with j1 < j2.
DetectionReport find_outliers_monochromatic(const BooleanMatrix& data, const Parameters& params,
                                            uint64_t seed);

/// Shared threshold predicate so the oracle and the listing phase can never
/// disagree on a borderline pair. |ip| is an integer while fraction*d is
/// not always representable, so the bound is snapped down by a relative
/// 1e-9 before comparing; exact ties count as meeting the threshold.
inline bool meets_threshold(int64_t ip, double fraction, int64_t d) {
    const double bound = fraction * static_cast<double>(d);
    return static_cast<double>(std::abs(ip)) >= bound - 1e-9 * std::max(1.0, std::abs(bound));
}

/// Sort + dedupe in place.
void canonicalize(std::vector<OutlierPair>& pairs);

}  // namespace corrseek
