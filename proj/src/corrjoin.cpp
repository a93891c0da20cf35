#include "corrseek/corrjoin.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "corrseek/rng.hpp"

namespace corrseek {

namespace {

// stream tags for plan randomness
enum : uint64_t { kPartition = 1, kTuplesLeft = 2, kTuplesRight = 3, kAlpha = 4, kBeta = 5 };

std::vector<IndexTuple> draw_tuples(Rng rng, int64_t count, int64_t len, int64_t d) {
    std::vector<IndexTuple> tuples(count);
    for (auto& tuple : tuples) {
        tuple.resize(len);
        for (auto& idx : tuple) idx = static_cast<uint32_t>(rng.next_below(d));
    }
    return tuples;
}

std::vector<int8_t> draw_signs(Rng rng, int64_t count) {
    std::vector<int8_t> signs(count);
    for (auto& sv : signs) sv = static_cast<int8_t>(rng.next_sign());
    return signs;
}

}  // namespace

IndexTuple IterationPlan::full_tuple(int64_t r) const {
    const int64_t root = static_cast<int64_t>(sample_left.size());
    const IndexTuple& left = sample_left[r / root];
    const IndexTuple& right = sample_right[r % root];
    IndexTuple full;
    full.reserve(left.size() + right.size());
    full.insert(full.end(), left.begin(), left.end());
    full.insert(full.end(), right.begin(), right.end());
    return full;
}

IterationPlan setup_iteration(int64_t n_padded, int64_t d, const Parameters& params,
                              uint64_t seed) {
    if (params.t < 1 || n_padded % params.t != 0) {
        throw std::invalid_argument("setup_iteration: t must divide n_padded");
    }
    if (params.p % 2 != 0 || params.p < 2) {
        throw std::invalid_argument("setup_iteration: p must be even and >= 2");
    }
    const int64_t root = isqrt_exact(params.s);

    IterationPlan plan;
    plan.n_padded = n_padded;
    plan.d = d;
    plan.t = params.t;
    plan.p = params.p;
    plan.s = params.s;
    plan.seed = seed;

    plan.order.resize(n_padded);
    std::iota(plan.order.begin(), plan.order.end(), 0);
    Rng part = Rng::keyed(seed, {kPartition});
    part.shuffle(plan.order);

    plan.sample_left = draw_tuples(Rng::keyed(seed, {kTuplesLeft}), root, params.p / 2, d);
    plan.sample_right = draw_tuples(Rng::keyed(seed, {kTuplesRight}), root, params.p / 2, d);
    plan.signs_alpha = draw_signs(Rng::keyed(seed, {kAlpha}), n_padded);
    plan.signs_beta = draw_signs(Rng::keyed(seed, {kBeta}), n_padded);
    return plan;
}

CompressedMatrix compress(const BooleanMatrix& m, const IterationPlan& plan,
                          std::span<const int8_t> signs) {
    if (m.padded_cols() != plan.n_padded || m.dim() != plan.d ||
        signs.size() != static_cast<size_t>(plan.n_padded)) {
        throw std::invalid_argument("compress: plan does not match matrix");
    }
    const int64_t root = static_cast<int64_t>(plan.sample_left.size());
    const int64_t blocks = plan.block_count();
    const int64_t t = plan.t;

    CompressedMatrix out;
    out.s = plan.s;
    out.blocks = blocks;
    out.plan_seed = plan.seed;
    out.values = IntMatrix(plan.s, blocks, t);

#pragma omp parallel for schedule(dynamic)
    for (int64_t k = 0; k < blocks; ++k) {
        // l_{i1 j} = sign_j * (col_j^{x p/2})_{i1};  r_{i2 j} = (col_j^{x p/2})_{i2}
        SignMatrix left(root, t), right(root, t);
        const auto block = plan.block(k);
        for (int64_t c = 0; c < t; ++c) {
            const int64_t j = block[c];
            const ColumnView col = m.col(j);
            const int sign = signs[j];
            for (int64_t u = 0; u < root; ++u) {
                left.set(u, c, sign * tensor_entry(col, plan.sample_left[u]));
            }
            for (int64_t v = 0; v < root; ++v) {
                right.set(v, c, tensor_entry(col, plan.sample_right[v]));
            }
        }
        const IntMatrix grid = gemm_pm1_nt(left, right);  // root x root
        for (int64_t u = 0; u < root; ++u) {
            for (int64_t v = 0; v < root; ++v) {
                out.values.at(u * root + v, k) = grid.at(u, v);
            }
        }
    }
    return out;
}

std::vector<MarkedPair> detect(const CompressedMatrix& hat_a, const CompressedMatrix& hat_b,
                               const Parameters& params) {
    if (hat_a.s != hat_b.s || hat_a.plan_seed != hat_b.plan_seed) {
        throw std::invalid_argument("detect: compressed matrices come from different plans");
    }
    const IntMatrix product = gemm_int_tn(hat_a.values, hat_b.values);
    const double threshold =
        params.threshold_constant * std::pow(params.rho, static_cast<double>(params.p)) *
        static_cast<double>(params.s);

    std::vector<MarkedPair> marked;
    for (int64_t k1 = 0; k1 < hat_a.blocks; ++k1) {
        for (int64_t k2 = 0; k2 < hat_b.blocks; ++k2) {
            const int64_t entry = product.at(k1, k2);
            assert(std::abs(entry) <= hat_a.s * params.t * params.t);
            if (std::abs(entry) >= threshold) {
                marked.push_back({k1, k2, std::abs(entry)});
            }
        }
    }
    return marked;
}

void canonicalize(std::vector<OutlierPair>& pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const OutlierPair& a, const OutlierPair& b) {
                                return a.j1 == b.j1 && a.j2 == b.j2;
                            }),
                pairs.end());
}

std::vector<OutlierPair> list_outliers(const BooleanMatrix& a, const BooleanMatrix& b,
                                       const IterationPlan& plan,
                                       const std::vector<MarkedPair>& marked, double rho) {
    std::vector<OutlierPair> out;
    for (const MarkedPair& mark : marked) {
        for (const uint32_t j1 : plan.block(mark.k1)) {
            if (a.is_padding(j1)) continue;
            const ColumnView ca = a.col(j1);
            for (const uint32_t j2 : plan.block(mark.k2)) {
                if (b.is_padding(j2)) continue;
                const int64_t ip = inner_product(ca, b.col(j2));
                if (meets_threshold(ip, rho, a.dim())) {
                    out.push_back({j1, j2, ip});
                }
            }
        }
    }
    canonicalize(out);
    return out;
}

DetectionReport run_detection(const BooleanMatrix& a, const BooleanMatrix& b,
                              const Parameters& params, uint64_t seed, bool listing) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("run_detection: dimension mismatch");
    }
    const BooleanMatrix pa = pad_to_multiple(a, params.t);
    const BooleanMatrix pb = pad_to_multiple(b, params.t);
    if (pa.padded_cols() != pb.padded_cols()) {
        throw std::invalid_argument("run_detection: column counts must agree after padding");
    }
    const int64_t n_padded = pa.padded_cols();
    const int64_t cap = params.mark_cap > 0 ? params.mark_cap : std::max(pa.cols(), pb.cols());

    std::vector<std::vector<OutlierPair>> per_iter(params.iterations);
    std::vector<int64_t> iter_marks(params.iterations, 0);
    std::atomic<bool> overflow{false};
    std::atomic<bool> failed{false};
    int64_t overflow_iter = 0, overflow_marks = 0;
    std::exception_ptr first_error;

// exceptions must not escape the parallel region; the first one is kept and
// rethrown after the joins
#pragma omp parallel for schedule(dynamic)
    for (int64_t it = 0; it < params.iterations; ++it) {
        if (overflow.load() || failed.load()) continue;
        try {
            const IterationPlan plan = setup_iteration(
                n_padded, pa.dim(), params,
                Rng::keyed(seed, {0xC0483u, static_cast<uint64_t>(it)}).next_u64());
            const CompressedMatrix hat_a = compress(pa, plan, plan.signs_alpha);
            const CompressedMatrix hat_b = compress(pb, plan, plan.signs_beta);
            const std::vector<MarkedPair> marks = detect(hat_a, hat_b, params);
            iter_marks[it] = static_cast<int64_t>(marks.size());
            if (static_cast<int64_t>(marks.size()) > cap) {
                bool expected = false;
                if (overflow.compare_exchange_strong(expected, true)) {
                    overflow_iter = it;
                    overflow_marks = static_cast<int64_t>(marks.size());
                }
                continue;
            }
            if (listing) {
                per_iter[it] = list_outliers(pa, pb, plan, marks, params.rho);
            }
        } catch (...) {
            bool expected = false;
            if (failed.compare_exchange_strong(expected, true)) {
                first_error = std::current_exception();
            }
        }
    }
    if (failed.load()) {
        std::rethrow_exception(first_error);
    }
    if (overflow.load()) {
        throw MarkCapExceeded(overflow_marks, cap, overflow_iter);
    }

    DetectionReport report;
    report.iteration_marks = std::move(iter_marks);
    for (int64_t m : report.iteration_marks) report.any_marked |= (m > 0);
    for (auto& chunk : per_iter) {
        report.pairs.insert(report.pairs.end(), chunk.begin(), chunk.end());
    }
    canonicalize(report.pairs);
    return report;
}

DetectionReport find_outliers(const BooleanMatrix& a, const BooleanMatrix& b,
                              const Parameters& params, uint64_t seed) {
    return run_detection(a, b, params, seed, true);
}

namespace {

BooleanMatrix gather_columns(const BooleanMatrix& src, std::span<const uint32_t> cols,
                             std::vector<int64_t>& index_out) {
    index_out.clear();
    for (uint32_t j : cols) {
        if (!src.is_padding(j)) index_out.push_back(j);
    }
    BooleanMatrix out(src.dim(), static_cast<int64_t>(index_out.size()));
    for (size_t c = 0; c < index_out.size(); ++c) {
        for (int64_t i = 0; i < src.dim(); ++i) {
            out.set_entry(i, static_cast<int64_t>(c), src.entry(i, index_out[c]));
        }
    }
    return out;
}

}  // namespace

DetectionReport find_outliers_two_level(const BooleanMatrix& a, const BooleanMatrix& b,
                                        const Parameters& params, double kappa, uint64_t seed) {
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw std::invalid_argument("find_outliers_two_level: kappa must lie in (0,1)");
    }
    const BooleanMatrix pa = pad_to_multiple(a, params.t);
    const BooleanMatrix pb = pad_to_multiple(b, params.t);
    const int64_t n_padded = pa.padded_cols();
    const int64_t cap = params.mark_cap > 0 ? params.mark_cap : std::max(pa.cols(), pb.cols());

    // second level reuses (p, s, iterations); only the block size shrinks,
    // derived from the sub-instance size t the way t was derived from n
    Parameters inner = params;
    inner.t = params.t >= 2 ? derive_block_size(params.t, kappa) : 1;

    DetectionReport report;
    report.iteration_marks.assign(params.iterations, 0);
    std::vector<std::vector<OutlierPair>> per_iter(params.iterations);

    for (int64_t it = 0; it < params.iterations; ++it) {
        const IterationPlan plan =
            setup_iteration(n_padded, pa.dim(), params, Rng::keyed(seed, {0xC0483u, static_cast<uint64_t>(it)}).next_u64());
        const CompressedMatrix hat_a = compress(pa, plan, plan.signs_alpha);
        const CompressedMatrix hat_b = compress(pb, plan, plan.signs_beta);
        const std::vector<MarkedPair> marks = detect(hat_a, hat_b, params);
        report.iteration_marks[it] = static_cast<int64_t>(marks.size());
        if (static_cast<int64_t>(marks.size()) > cap) {
            throw MarkCapExceeded(static_cast<int64_t>(marks.size()), cap, it);
        }
        for (const MarkedPair& mark : marks) {
            std::vector<int64_t> ia, ib;
            const BooleanMatrix sub_a = gather_columns(pa, plan.block(mark.k1), ia);
            const BooleanMatrix sub_b = gather_columns(pb, plan.block(mark.k2), ib);
            if (ia.empty() || ib.empty()) continue;
            const uint64_t sub_seed =
                Rng::keyed(seed, {0x2F0Cu, static_cast<uint64_t>(it),
                                  static_cast<uint64_t>(mark.k1), static_cast<uint64_t>(mark.k2)})
                    .next_u64();
            const DetectionReport sub = run_detection(sub_a, sub_b, inner, sub_seed, true);
            for (const OutlierPair& pr : sub.pairs) {
                per_iter[it].push_back({ia[pr.j1], ib[pr.j2], pr.ip});
            }
        }
    }
    for (auto& chunk : per_iter) {
        report.pairs.insert(report.pairs.end(), chunk.begin(), chunk.end());
        report.any_marked |= !chunk.empty();
    }
    for (int64_t m : report.iteration_marks) report.any_marked |= (m > 0);
    canonicalize(report.pairs);
    return report;
}

std::vector<SplitInstance> reduce_monochromatic(const BooleanMatrix& data) {
    const int64_t n = data.cols();
    if (n < 2) {
        throw std::invalid_argument("reduce_monochromatic: need at least two columns");
    }
    int bits = 0;
    while ((int64_t{1} << bits) < n) ++bits;
    bits = std::max(bits, 1);

    std::vector<SplitInstance> out;
    for (int k = 0; k < bits; ++k) {
        std::vector<int64_t> ia, ib;
        for (int64_t j = 0; j < n; ++j) {
            ((j >> k) & 1 ? ib : ia).push_back(j);
        }
        if (ia.empty() || ib.empty()) continue;
        SplitInstance inst;
        inst.a = BooleanMatrix(data.dim(), static_cast<int64_t>(ia.size()));
        inst.b = BooleanMatrix(data.dim(), static_cast<int64_t>(ib.size()));
        for (size_t c = 0; c < ia.size(); ++c) {
            for (int64_t i = 0; i < data.dim(); ++i) {
                inst.a.set_entry(i, static_cast<int64_t>(c), data.entry(i, ia[c]));
            }
        }
        for (size_t c = 0; c < ib.size(); ++c) {
            for (int64_t i = 0; i < data.dim(); ++i) {
                inst.b.set_entry(i, static_cast<int64_t>(c), data.entry(i, ib[c]));
            }
        }
        inst.a_index = std::move(ia);
        inst.b_index = std::move(ib);
        out.push_back(std::move(inst));
    }
    return out;
}

DetectionReport find_outliers_monochromatic(const BooleanMatrix& data, const Parameters& params,
                                            uint64_t seed) {
    DetectionReport merged;
    int64_t which = 0;
    for (const SplitInstance& inst : reduce_monochromatic(data)) {
        const uint64_t sub_seed = Rng::keyed(seed, {0x35171u, static_cast<uint64_t>(which++)}).next_u64();
        const DetectionReport rep = find_outliers(inst.a, inst.b, params, sub_seed);
        merged.any_marked |= rep.any_marked;
        merged.iteration_marks.insert(merged.iteration_marks.end(), rep.iteration_marks.begin(),
                                      rep.iteration_marks.end());
        for (const OutlierPair& pr : rep.pairs) {
            int64_t j1 = inst.a_index[pr.j1];
            int64_t j2 = inst.b_index[pr.j2];
            if (j1 > j2) std::swap(j1, j2);
            merged.pairs.push_back({j1, j2, pr.ip});
        }
    }
    canonicalize(merged.pairs);
    return merged;
}

}  // namespace corrseek
