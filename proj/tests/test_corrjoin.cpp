#include <doctest.h>

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "corrseek/corrjoin.hpp"
#include "corrseek/workbench.hpp"
#include "helpers.hpp"

using namespace corrseek;

TEST_SUITE_BEGIN("corrjoin");

namespace {

Parameters small_params(double rho, double tau, int64_t t, int64_t p, int64_t s,
                        int64_t iterations, int64_t mark_cap = 0) {
    Parameters params = explicit_parameters(rho, tau, t, p, s, iterations);
    params.mark_cap = mark_cap;
    return params;
}

}  // namespace

TEST_CASE("setup produces a disjoint equal-size partition") {
    const Parameters params = small_params(0.5, 0.1, 4, 2, 4, 1);
    const IterationPlan plan = setup_iteration(8, 5, params, 99);
    CHECK(plan.block_count() == 2);
    std::set<uint32_t> seen;
    for (int64_t k = 0; k < 2; ++k) {
        const auto block = plan.block(k);
        CHECK(block.size() == 4);
        seen.insert(block.begin(), block.end());
    }
    CHECK(seen.size() == 8);
    CHECK(*seen.rbegin() == 7);

    CHECK(plan.sample_left.size() == 2);
    CHECK(plan.sample_right.size() == 2);
    for (const IndexTuple& tup : plan.sample_left) {
        CHECK(tup.size() == 1);
        for (uint32_t idx : tup) CHECK(idx < 5);
    }
    CHECK(plan.signs_alpha.size() == 8);
    for (int8_t sv : plan.signs_alpha) CHECK((sv == 1 || sv == -1));
}

TEST_CASE("same seed gives the same plan") {
    const Parameters params = small_params(0.5, 0.1, 2, 4, 9, 1);
    const IterationPlan p1 = setup_iteration(6, 7, params, 1234);
    const IterationPlan p2 = setup_iteration(6, 7, params, 1234);
    CHECK(p1.order == p2.order);
    CHECK(p1.sample_left == p2.sample_left);
    CHECK(p1.sample_right == p2.sample_right);
    CHECK(p1.signs_alpha == p2.signs_alpha);
    CHECK(p1.signs_beta == p2.signs_beta);
    const IterationPlan p3 = setup_iteration(6, 7, params, 1235);
    CHECK(p1.order != p3.order);
}

TEST_CASE("divisibility is enforced") {
    const Parameters params = small_params(0.5, 0.1, 4, 2, 4, 1);
    CHECK_THROWS_AS((void)setup_iteration(7, 5, params, 1), std::invalid_argument);
}

TEST_CASE("compression: single-column blocks sample the signed tensor power") {
    Rng rng(61);
    const BooleanMatrix m = testutil::random_matrix(6, 4, rng);
    const Parameters params = small_params(0.5, 0.1, 1, 2, 9, 1);
    const IterationPlan plan = setup_iteration(4, 6, params, 5);
    const CompressedMatrix hat = compress(m, plan, plan.signs_alpha);
    for (int64_t k = 0; k < 4; ++k) {
        const int64_t j = plan.block(k)[0];
        for (int64_t r = 0; r < 9; ++r) {
            const int expect = plan.signs_alpha[j] * testutil::naive_tensor_entry(m, j, plan.full_tuple(r));
            CHECK(hat.value(r, k) == expect);
        }
    }
}

TEST_CASE("compression: identical all-ones columns aggregate to t") {
    const BooleanMatrix ones(5, 8);  // all +1
    const Parameters params = small_params(0.5, 0.1, 4, 2, 4, 1);
    IterationPlan plan = setup_iteration(8, 5, params, 3);
    std::fill(plan.signs_alpha.begin(), plan.signs_alpha.end(), int8_t{1});
    const CompressedMatrix hat = compress(ones, plan, plan.signs_alpha);
    for (int64_t r = 0; r < 4; ++r) {
        for (int64_t k = 0; k < 2; ++k) CHECK(hat.value(r, k) == 4);
    }
}

TEST_CASE("compression equals the term-by-term definition") {
    Rng rng(67);
    for (int rep = 0; rep < 60; ++rep) {
        const int64_t d = 2 + rng.next_below(7);
        const int64_t n = 2 + rng.next_below(15);
        const int64_t p = 2 * (1 + rng.next_below(2));
        const int64_t s_choices[] = {4, 9, 16};
        const int64_t s = s_choices[rng.next_below(3)];
        const int64_t t_choices[] = {1, 2, 4};
        const int64_t t = t_choices[rng.next_below(3)];

        const BooleanMatrix m0 = testutil::random_matrix(d, n, rng);
        const BooleanMatrix m = pad_to_multiple(m0, t);
        const Parameters params = small_params(0.5, 0.1, t, p, s, 1);
        const IterationPlan plan = setup_iteration(m.padded_cols(), d, params, rng.next_u64());
        const CompressedMatrix hat = compress(m, plan, plan.signs_alpha);
        for (int64_t r = 0; r < s; ++r) {
            for (int64_t k = 0; k < plan.block_count(); ++k) {
                CHECK(hat.value(r, k) ==
                      testutil::direct_hat_entry(m, plan, plan.signs_alpha, r, k));
            }
        }
    }
}

TEST_CASE("detection product equals the double-sum definition") {
    Rng rng(71);
    for (int rep = 0; rep < 25; ++rep) {
        const int64_t d = 2 + rng.next_below(7);
        const int64_t n = 2 + rng.next_below(15);
        const int64_t p = 2 * (1 + rng.next_below(2));
        const int64_t s_choices[] = {4, 9, 16};
        const int64_t s = s_choices[rng.next_below(3)];
        const int64_t t_choices[] = {1, 2, 4};
        const int64_t t = t_choices[rng.next_below(3)];

        const BooleanMatrix a = pad_to_multiple(testutil::random_matrix(d, n, rng), t);
        const BooleanMatrix b = pad_to_multiple(testutil::random_matrix(d, n, rng), t);
        const Parameters params = small_params(0.5, 0.1, t, p, s, 1);
        const IterationPlan plan = setup_iteration(a.padded_cols(), d, params, rng.next_u64());
        const CompressedMatrix hat_a = compress(a, plan, plan.signs_alpha);
        const CompressedMatrix hat_b = compress(b, plan, plan.signs_beta);
        const IntMatrix product = gemm_int_tn(hat_a.values, hat_b.values);
        for (int64_t k1 = 0; k1 < plan.block_count(); ++k1) {
            for (int64_t k2 = 0; k2 < plan.block_count(); ++k2) {
                CHECK(product.at(k1, k2) ==
                      testutil::direct_output_entry(a, b, plan, k1, k2));
            }
        }
    }
}

TEST_CASE("detect marks a duplicated pair with score s") {
    // one duplicate pair across A and B, single-column blocks: the partial
    // inner product of the duplicate is exactly s, so its block pair is
    // marked no matter the signs
    Rng rng(73);
    const BooleanMatrix a = testutil::random_matrix(16, 4, rng);
    BooleanMatrix b = testutil::random_matrix(16, 4, rng);
    for (int64_t i = 0; i < 16; ++i) b.set_entry(i, 2, a.entry(i, 1));

    const Parameters params = small_params(0.9, 0.3, 1, 2, 9, 1);
    const IterationPlan plan = setup_iteration(4, 16, params, 17);
    const CompressedMatrix hat_a = compress(a, plan, plan.signs_alpha);
    const CompressedMatrix hat_b = compress(b, plan, plan.signs_beta);
    const auto marks = detect(hat_a, hat_b, params);

    int64_t k1 = -1, k2 = -1;
    for (int64_t k = 0; k < plan.block_count(); ++k) {
        if (plan.block(k)[0] == 1) k1 = k;
        if (plan.block(k)[0] == 2) k2 = k;
    }
    bool found = false;
    for (const MarkedPair& mp : marks) {
        if (mp.k1 == k1 && mp.k2 == k2) {
            found = true;
            CHECK(mp.score == 9);
        }
    }
    CHECK(found);
}

TEST_CASE("all-padding blocks compress to zero and are never marked") {
    const BooleanMatrix tiny(8, 2);
    const Parameters params = small_params(0.5, 0.1, 2, 2, 4, 1);
    const BooleanMatrix wide = pad_to_multiple(tiny, 8);  // 6 pure padding columns
    const IterationPlan plan = setup_iteration(8, 8, params, 2);
    const CompressedMatrix hat = compress(wide, plan, plan.signs_alpha);
    int64_t nonzero_cols = 0;
    for (int64_t k = 0; k < hat.blocks; ++k) {
        bool nz = false;
        for (int64_t r = 0; r < hat.s; ++r) nz |= hat.value(r, k) != 0;
        nonzero_cols += nz;
    }
    CHECK(nonzero_cols <= 2);  // padding columns contribute nothing

    // zero compressed matrices produce zero marks
    CompressedMatrix zero_a = hat, zero_b = hat;
    for (auto& v : zero_a.values.data) v = 0;
    for (auto& v : zero_b.values.data) v = 0;
    CHECK(detect(zero_a, zero_b, params).empty());
}

TEST_CASE("compressed and detection entries respect their bounds") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        const int64_t t = 1 + rng.next_below(4);
        const int64_t s = 16;
        const BooleanMatrix a = pad_to_multiple(testutil::random_matrix(8, 12, rng), t);
        const BooleanMatrix b = pad_to_multiple(testutil::random_matrix(8, 12, rng), t);
        const Parameters params = small_params(0.5, 0.1, t, 2, s, 1);
        const IterationPlan plan = setup_iteration(a.padded_cols(), 8, params, rng.next_u64());
        const CompressedMatrix hat_a = compress(a, plan, plan.signs_alpha);
        const CompressedMatrix hat_b = compress(b, plan, plan.signs_beta);
        for (int64_t v : hat_a.values.data) CHECK(std::abs(v) <= t);
        const IntMatrix product = gemm_int_tn(hat_a.values, hat_b.values);
        for (int64_t v : product.data) CHECK(std::abs(v) <= s * t * t);
    }
}

TEST_CASE("decision variant: zero-outlier instance reports false on nearly all seeds") {
    // calibrated so the background stays under the marking threshold
    const PlantedInstance inst = gen_promise_instance(32, 1024, 0.9, 0.3, 0, 55);
    Parameters params = small_params(0.9, 0.3, 1, 2, 16384, 1);
    params.mark_cap = 1 << 20;
    int negatives = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const DetectionReport rep = run_detection(inst.a, inst.b, params, seed, false);
        CHECK(rep.pairs.empty());  // listing suppressed
        negatives += rep.any_marked ? 0 : 1;
    }
    CHECK(negatives >= 19);
}

TEST_CASE("listing keeps exactly the above-threshold pairs in marked blocks") {
    Rng rng(79);
    const BooleanMatrix a = pad_to_multiple(testutil::random_matrix(32, 10, rng), 2);
    const BooleanMatrix b = pad_to_multiple(testutil::random_matrix(32, 10, rng), 2);
    const Parameters params = small_params(0.25, 0.1, 2, 2, 9, 1);
    const IterationPlan plan = setup_iteration(a.padded_cols(), 32, params, 31);

    CHECK(list_outliers(a, b, plan, {}, 0.25).empty());

    std::vector<MarkedPair> everything;
    for (int64_t k1 = 0; k1 < plan.block_count(); ++k1) {
        for (int64_t k2 = 0; k2 < plan.block_count(); ++k2) everything.push_back({k1, k2, 0});
    }
    const auto listed = list_outliers(a, b, plan, everything, 0.25);
    const auto oracle = brute_force_pairs(a, b, 0.25);
    std::vector<OutlierPair> oracle_sorted = oracle;
    canonicalize(oracle_sorted);
    CHECK(listed == oracle_sorted);
}

TEST_CASE("find_outliers output is always a subset of the oracle") {
    Rng rng(83);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        // odd block sizes and non-dividing column counts exercise padding
        const int64_t n = 20 + static_cast<int64_t>(rng.next_below(20));
        const int64_t t_choices[] = {1, 2, 3, 4, 5};
        const int64_t s_choices[] = {4, 9, 16, 25};
        const BooleanMatrix a = testutil::random_matrix(64, n, rng);
        const BooleanMatrix b = testutil::random_matrix(64, n, rng);
        Parameters params = small_params(0.35, 0.15, t_choices[rng.next_below(5)], 2,
                                         s_choices[rng.next_below(4)], 4);
        params.mark_cap = 1 << 20;
        const DetectionReport rep = find_outliers(a, b, params, seed);
        const auto oracle = brute_force_pairs(a, b, 0.35);
        for (const OutlierPair& pr : rep.pairs) {
            CHECK(std::find(oracle.begin(), oracle.end(), pr) != oracle.end());
            CHECK(testutil::naive_inner_product(a, pr.j1, b, pr.j2) == pr.ip);
        }
    }
}

TEST_CASE("zero-outlier instance lists nothing") {
    const PlantedInstance inst = gen_promise_instance(64, 256, 0.5, 0.25, 0, 424);
    CHECK(brute_force_pairs(inst.a, inst.b, 0.5).empty());
    Parameters params = small_params(0.5, 0.25, 4, 2, 1024, 4);
    params.mark_cap = 1 << 20;
    const DetectionReport rep = find_outliers(inst.a, inst.b, params, 5);
    CHECK(rep.pairs.empty());
}

TEST_CASE("planted pair is recovered on nearly all seeds") {
    int hits = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const PlantedInstance inst = gen_promise_instance(256, 512, 0.95, 0.3, 1, 1000 + seed);
        const Parameters params = small_params(0.95, 0.3, 8, 2, 16384, 4, 2048);
        const DetectionReport rep = find_outliers(inst.a, inst.b, params, seed);
        const PlantedPair& want = inst.planted.front();
        for (const OutlierPair& pr : rep.pairs) {
            if (pr.j1 == want.j1 && pr.j2 == want.j2) {
                ++hits;
                break;
            }
        }
    }
    CHECK(hits >= 18);
}

TEST_CASE("mark cap aborts instead of degrading") {
    const BooleanMatrix ones(32, 32);  // every pair is a perfect correlation
    const Parameters params = small_params(0.9, 0.3, 1, 2, 4, 1);  // cap defaults to n
    CHECK_THROWS_AS((void)find_outliers(ones, ones, params, 7), MarkCapExceeded);
}

TEST_CASE("determinism across repeated runs and thread counts") {
    Rng rng(89);
    const BooleanMatrix a = testutil::random_matrix(64, 24, rng);
    const BooleanMatrix b = testutil::random_matrix(64, 24, rng);
    Parameters params = small_params(0.3, 0.1, 4, 2, 16, 6);
    params.mark_cap = 1 << 20;
    const DetectionReport r1 = find_outliers(a, b, params, 11);
    const DetectionReport r2 = find_outliers(a, b, params, 11);
    CHECK(r1.pairs == r2.pairs);
    CHECK(r1.iteration_marks == r2.iteration_marks);
#ifdef _OPENMP
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const DetectionReport serial = find_outliers(a, b, params, 11);
    omp_set_num_threads(before);
    CHECK(serial.pairs == r1.pairs);
    CHECK(serial.iteration_marks == r1.iteration_marks);
#endif
}

TEST_CASE("two-level equals single-level on a strongly planted instance") {
    const PlantedInstance inst = gen_promise_instance(64, 128, 0.95, 0.5, 1, 77);
    Parameters params = small_params(0.95, 0.5, 4, 2, 1024, 6);
    params.mark_cap = 1 << 20;
    const DetectionReport one = find_outliers(inst.a, inst.b, params, 13);
    const DetectionReport two = find_outliers_two_level(inst.a, inst.b, params, 0.3, 13);
    const PlantedPair& want = inst.planted.front();
    bool in_one = false, in_two = false;
    for (const OutlierPair& pr : one.pairs) in_one |= pr.j1 == want.j1 && pr.j2 == want.j2;
    for (const OutlierPair& pr : two.pairs) in_two |= pr.j1 == want.j1 && pr.j2 == want.j2;
    CHECK(in_one);
    CHECK(in_two);
    for (const OutlierPair& pr : two.pairs) {
        CHECK(testutil::naive_inner_product(inst.a, pr.j1, inst.b, pr.j2) == pr.ip);
        CHECK(meets_threshold(pr.ip, 0.95, 128));
    }
}

TEST_CASE("two-level with single-column blocks is per-pair verification") {
    const PlantedInstance inst = gen_promise_instance(32, 128, 0.95, 0.5, 1, 78);
    Parameters params = small_params(0.95, 0.5, 1, 2, 1024, 6);
    params.mark_cap = 1 << 20;
    const DetectionReport one = find_outliers(inst.a, inst.b, params, 21);
    const DetectionReport two = find_outliers_two_level(inst.a, inst.b, params, 0.5, 21);
    CHECK(one.pairs == two.pairs);
}

TEST_CASE("two-level on a zero-outlier instance is empty") {
    const PlantedInstance inst = gen_promise_instance(32, 256, 0.5, 0.25, 0, 79);
    Parameters params = small_params(0.5, 0.25, 4, 2, 1024, 3);
    params.mark_cap = 1 << 20;
    CHECK(find_outliers_two_level(inst.a, inst.b, params, 0.5, 3).pairs.empty());
}

TEST_CASE("monochromatic reduction structure") {
    const BooleanMatrix two(4, 2);
    const auto inst2 = reduce_monochromatic(two);
    REQUIRE(inst2.size() == 1);
    CHECK(inst2[0].a_index == std::vector<int64_t>{0});
    CHECK(inst2[0].b_index == std::vector<int64_t>{1});

    const BooleanMatrix four(4, 4);
    const auto inst4 = reduce_monochromatic(four);
    REQUIRE(inst4.size() == 2);
    // pair (0,3) differs in both bits, so it appears in both instances
    for (const SplitInstance& si : inst4) {
        const bool has0 = std::find(si.a_index.begin(), si.a_index.end(), 0) != si.a_index.end();
        const bool has3 = std::find(si.b_index.begin(), si.b_index.end(), 3) != si.b_index.end();
        CHECK((has0 && has3));
    }
}

TEST_CASE("reduction covers every distinct pair") {
    Rng rng(97);
    BooleanMatrix data = testutil::random_matrix(64, 16, rng);
    for (int64_t i = 0; i < 64; ++i) data.set_entry(i, 9, data.entry(i, 2));  // plant a duplicate

    const auto mono = brute_force_pairs_mono(data, 0.4);
    std::vector<OutlierPair> merged;
    for (const SplitInstance& si : reduce_monochromatic(data)) {
        for (const OutlierPair& pr : brute_force_pairs(si.a, si.b, 0.4)) {
            int64_t j1 = si.a_index[pr.j1], j2 = si.b_index[pr.j2];
            if (j1 > j2) std::swap(j1, j2);
            merged.push_back({j1, j2, pr.ip});
        }
    }
    canonicalize(merged);
    std::vector<OutlierPair> expect = mono;
    canonicalize(expect);
    CHECK(merged == expect);
}

TEST_SUITE_END();
