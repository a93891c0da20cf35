#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "corrseek/apps.hpp"
#include "corrseek/workbench.hpp"
#include "helpers.hpp"

using namespace corrseek;

TEST_SUITE_BEGIN("apps");

TEST_CASE("delta from epsilon") {
    const double omega = 2.3728639;
    CHECK(delta_from_epsilon(0.5, omega) ==
          doctest::Approx(9.0 * 0.5 / (2.0 * omega + 1.5)).epsilon(1e-12));
    CHECK_THROWS_AS((void)delta_from_epsilon(0.0, omega), std::invalid_argument);
    CHECK_THROWS_AS((void)delta_from_epsilon(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("light bulb: a perfect duplicate is found exactly") {
    const PlantedInstance inst = gen_lightbulb(64, 256, 0.999, 21);  // zero flips
    SolverOptions opts;
    opts.overrides.t = 2;
    opts.overrides.p = 2;
    opts.overrides.s = 256;
    opts.overrides.iterations = 6;
    const LightbulbResult got = solve_lightbulb(inst.a, 0.9, opts, 3);
    CHECK(got.j1 == inst.planted[0].j1);
    CHECK(got.j2 == inst.planted[0].j2);
    CHECK(got.ip == 256);
}

TEST_CASE("light bulb: statistical recovery") {
    int hits = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const PlantedInstance inst = gen_lightbulb(128, 1024, 0.5, 500 + seed);
        SolverOptions opts;
        opts.overrides.t = 4;
        opts.overrides.p = 2;
        opts.overrides.s = 16384;
        opts.overrides.iterations = 4;
        opts.overrides.threshold_constant = 0.5;
        try {
            const LightbulbResult got = solve_lightbulb(inst.a, 0.5, opts, seed);
            if (got.j1 == inst.planted[0].j1 && got.j2 == inst.planted[0].j2) ++hits;
        } catch (const NoPairFound&) {
        }
    }
    CHECK(hits >= 9);
}

TEST_CASE("light bulb: absence raises") {
    Rng rng(127);
    const BooleanMatrix data = testutil::random_matrix(256, 32, rng);
    CHECK(brute_force_pairs_mono(data, 0.9).empty());
    SolverOptions opts;
    opts.overrides.t = 2;
    opts.overrides.p = 2;
    opts.overrides.s = 256;
    opts.overrides.iterations = 4;
    CHECK_THROWS_AS((void)solve_lightbulb(data, 0.9, opts, 4), NoPairFound);
}

TEST_CASE("split lists: shapes and the noiseless identity") {
    const ParityInstance inst = gen_parity(3, 2, 0.0, 32, 31);
    const SplitLists lists = build_split_lists(inst.examples, 3, 2);
    CHECK(lists.a.cols() == 3);
    CHECK(lists.b.cols() == 3);
    CHECK(lists.a.dim() == 32);

    // for J1 subset of S and J2 = S \ J1 the inner product is exactly d
    const int32_t s0 = inst.support[0], s1 = inst.support[1];
    int64_t col_a = -1, col_b = -1;
    for (size_t c = 0; c < lists.left_sets.size(); ++c) {
        if (lists.left_sets[c] == std::vector<int32_t>{s0}) col_a = static_cast<int64_t>(c);
    }
    for (size_t c = 0; c < lists.right_sets.size(); ++c) {
        if (lists.right_sets[c] == std::vector<int32_t>{s1}) col_b = static_cast<int64_t>(c);
    }
    REQUIRE(col_a >= 0);
    REQUIRE(col_b >= 0);
    CHECK(inner_product(lists.a.col(col_a), lists.b.col(col_b)) == 32);
}

TEST_CASE("split lists: noisy signal sits at |1-2eta|d, everything else near zero") {
    for (uint64_t seed : {41u, 42u, 43u}) {
        const ParityInstance inst = gen_parity(10, 2, 0.25, 4000, seed);
        const SplitLists lists = build_split_lists(inst.examples, 10, 2);
        const auto strong = brute_force_pairs(lists.a, lists.b, 0.3);
        // exactly the pairs with J1 xor J2 = S survive at 0.3 (signal mean 0.5)
        for (const OutlierPair& pr : strong) {
            std::vector<int32_t> sym;
            std::set_symmetric_difference(lists.left_sets[pr.j1].begin(),
                                          lists.left_sets[pr.j1].end(),
                                          lists.right_sets[pr.j2].begin(),
                                          lists.right_sets[pr.j2].end(), std::back_inserter(sym));
            CHECK(sym == inst.support);
            CHECK(std::abs(static_cast<double>(pr.ip) / 4000.0 - 0.5) < 0.1);
        }
        CHECK(strong.size() == 2);  // ({a},{b}) and ({b},{a})
    }
}

TEST_CASE("parity: noiseless is exact") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const ParityInstance inst = gen_parity(8, 2, 0.0, 200, 100 + seed);
        SolverOptions opts;
        opts.retry_cap = 2;
        const auto got = solve_parity(inst.examples, 8, 2, 0.0, opts, nullptr, seed);
        CHECK(got == inst.support);
    }
}

TEST_CASE("parity: eta=0.2 with retries") {
    int hits = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const double eta = 0.2;
        const double rho = std::abs(1.0 - 2.0 * eta);
        const double delta = delta_from_epsilon(0.5, 2.3728639);
        const int64_t d = static_cast<int64_t>(
            std::ceil((2.0 * 2 + 3.0) * std::pow(rho, -2.0 / delta) * std::log(10.0)));
        ParityInstance inst = gen_parity(10, 2, eta, d, 700 + seed);
        int64_t refill = 0;
        auto more = [&](int64_t count) {
            return gen_parity_examples(inst.support, 10, eta, count,
                                       9000 + 100 * seed + (++refill));
        };
        SolverOptions opts;
        opts.retry_cap = 6;
        try {
            const auto got = solve_parity(inst.examples, 10, 2, eta, opts, more, seed);
            if (got == inst.support) ++hits;
        } catch (const NoPairFound&) {
        }
    }
    CHECK(hits >= 9);
}

TEST_CASE("parity: eta = 1/2 is rejected") {
    const ParityInstance inst = gen_parity(6, 2, 0.5, 50, 3);
    CHECK_THROWS_AS((void)solve_parity(inst.examples, 6, 2, 0.5, {}, nullptr, 1),
                    std::invalid_argument);
}

TEST_CASE("ov gadget truth table") {
    // h(x,y) = <u(x), v(y)>: 2 everywhere except h(1,1) = -2
    OVInstance cell;
    cell.dprime = 1;
    cell.n = 1;
    cell.s_entries = {0};
    cell.t_entries = {0};
    for (int x = 0; x <= 1; ++x) {
        for (int y = 0; y <= 1; ++y) {
            cell.s_entries[0] = static_cast<uint8_t>(x);
            cell.t_entries[0] = static_cast<uint8_t>(y);
            const OVTransform tf = ov_transform(cell);
            int64_t h = 0;
            for (int64_t i = 0; i < 4; ++i) {
                h += static_cast<int64_t>(tf.a.entry(i, 0)) * tf.b.entry(i, 0);
            }
            CHECK(h == (x == 1 && y == 1 ? -2 : 2));
            // with the ones row appended
            const int64_t full = testutil::naive_inner_product(tf.a, 0, tf.b, 0);
            CHECK(full == h + 1);
        }
    }
}

TEST_CASE("ov transform: outlier iff orthogonal, exhaustively for small d'") {
    for (int64_t dp = 1; dp <= 3; ++dp) {
        const int64_t combos = int64_t{1} << dp;
        OVInstance inst;
        inst.dprime = dp;
        inst.n = combos;
        inst.s_entries.assign(static_cast<size_t>(dp * combos), 0);
        inst.t_entries.assign(static_cast<size_t>(dp * combos), 0);
        for (int64_t j = 0; j < combos; ++j) {
            for (int64_t i = 0; i < dp; ++i) {
                inst.set_s(i, j, static_cast<uint8_t>((j >> i) & 1));
                inst.set_t(i, j, static_cast<uint8_t>((j >> i) & 1));
            }
        }
        const OVTransform tf = ov_transform(inst);
        const int64_t d = 4 * dp + 1;
        CHECK(std::abs(tf.rho - tf.tau) == doctest::Approx(2.0 / static_cast<double>(d)));
        for (int64_t j1 = 0; j1 < combos; ++j1) {
            for (int64_t j2 = 0; j2 < combos; ++j2) {
                int64_t dot = 0;
                for (int64_t i = 0; i < dp; ++i) {
                    dot += static_cast<int64_t>(inst.s_at(i, j1)) * inst.t_at(i, j2);
                }
                const int64_t ip = testutil::naive_inner_product(tf.a, j1, tf.b, j2);
                CHECK(ip == 2 * dp + 1 - 4 * dot);
                CHECK(meets_threshold(ip, tf.rho, d) == (dot == 0));
            }
        }
    }
}

TEST_CASE("ov: fixed examples") {
    OVInstance inst;
    inst.dprime = 1;
    inst.n = 1;
    inst.s_entries = {0};
    inst.t_entries = {0};
    OVTransform tf = ov_transform(inst);
    CHECK(testutil::naive_inner_product(tf.a, 0, tf.b, 0) == 3);
    CHECK(tf.rho == doctest::Approx(0.6));

    inst.s_entries = {1};
    inst.t_entries = {1};
    tf = ov_transform(inst);
    CHECK(testutil::naive_inner_product(tf.a, 0, tf.b, 0) == -1);
}

TEST_CASE("ov solver matches brute force on random instances") {
    Rng rng(131);
    int checked = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const int64_t n = 2 + rng.next_below(31);
        const int64_t dp = 1 + rng.next_below(10);
        const double density = 0.2 + 0.6 * rng.next_unit();
        const OVInstance inst = gen_ov(dp, n, density, seed);

        bool expect = false;
        for (int64_t j1 = 0; j1 < n && !expect; ++j1) {
            for (int64_t j2 = 0; j2 < n && !expect; ++j2) {
                int64_t dot = 0;
                for (int64_t i = 0; i < dp; ++i) {
                    dot += static_cast<int64_t>(inst.s_at(i, j1)) * inst.t_at(i, j2);
                }
                expect = dot == 0;
            }
        }
        const OVResult got = solve_ov(inst, {}, seed);
        CHECK(got.found == expect);
        if (got.found) {
            int64_t dot = 0;
            for (int64_t i = 0; i < dp; ++i) {
                dot += static_cast<int64_t>(inst.s_at(i, got.j1)) * inst.t_at(i, got.j2);
            }
            CHECK(dot == 0);
        }
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("ov: zero column and all-ones instances") {
    OVInstance inst = gen_ov(4, 8, 0.5, 77);
    for (int64_t i = 0; i < 4; ++i) inst.set_t(i, 3, 0);
    const OVResult got = solve_ov(inst, {}, 1);
    CHECK(got.found);

    OVInstance ones;
    ones.dprime = 3;
    ones.n = 5;
    ones.s_entries.assign(15, 1);
    ones.t_entries.assign(15, 1);
    CHECK(!solve_ov(ones, {}, 2).found);
}

TEST_SUITE_END();
