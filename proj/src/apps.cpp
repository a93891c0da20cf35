#include "corrseek/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "corrseek/rng.hpp"
#include "corrseek/workbench.hpp"

namespace corrseek {

double delta_from_epsilon(double epsilon, double omega) {
    if (!(epsilon > 0.0 && epsilon < omega / 3.0)) {
        throw std::invalid_argument("delta_from_epsilon: need 0 < epsilon < omega/3");
    }
    return 9.0 * epsilon / (2.0 * omega + 3.0 * epsilon);
}

namespace {

int64_t binom(int64_t n, int64_t k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    int64_t r = 1;
    for (int64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r < 0 || r > (int64_t{1} << 40)) return int64_t{1} << 40;  // saturate
    }
    return r;
}

std::vector<std::vector<int32_t>> all_subsets(int64_t n, int64_t k) {
    std::vector<std::vector<int32_t>> out;
    std::vector<int32_t> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    for (;;) {
        out.push_back(cur);
        int64_t i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int64_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<int32_t> symmetric_difference(const std::vector<int32_t>& a,
                                          const std::vector<int32_t>& b) {
    std::vector<int32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

// fill in desk-scale defaults for whatever the caller left unset; solvers
// never abort on mark volume unless told to
Parameters solver_parameters(int64_t n_cols, double rho, double tau,
                             const ParameterOverrides& ov) {
    ParameterOverrides eff = ov;
    if (!eff.t) {
        eff.t = std::max<int64_t>(
            1, static_cast<int64_t>(std::llround(std::cbrt(static_cast<double>(n_cols)))));
    }
    if (!eff.p) eff.p = 2;
    if (!eff.s) eff.s = 4096;
    if (!eff.iterations) {
        const double ln_n = std::log(static_cast<double>(std::max<int64_t>(n_cols, 3)));
        eff.iterations = std::clamp<int64_t>(static_cast<int64_t>(std::ceil(ln_n * ln_n)), 4, 24);
    }
    Parameters params =
        explicit_parameters(rho, tau, *eff.t, *eff.p, *eff.s, *eff.iterations);
    if (eff.threshold_constant) params.threshold_constant = *eff.threshold_constant;
    const int64_t blocks = (n_cols + params.t - 1) / params.t;
    params.mark_cap = eff.mark_cap ? *eff.mark_cap : blocks * blocks + 1;
    if (eff.kappa) params.kappa = eff.kappa;
    return params;
}

}  // namespace

LightbulbResult solve_lightbulb(const BooleanMatrix& data, double rho, const SolverOptions& opts,
                                uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("solve_lightbulb: rho must lie in (0,1)");
    }
    const double delta = delta_from_epsilon(opts.epsilon, opts.omega);
    const double tau = std::pow(rho, 1.0 / delta);
    const double big_delta = 1.0 / (1.0 - delta);
    const double gamma = 1.0 / (2.0 * big_delta + 1.0);

    Parameters params = solver_parameters(data.cols(), rho, tau, opts.overrides);
    params.gamma = gamma;
    params.delta_cap = big_delta;

    LightbulbResult best;
    bool found = false;
    int64_t which = 0;
    for (const SplitInstance& inst : reduce_monochromatic(data)) {
        const uint64_t sub_seed =
            Rng::keyed(seed, {0x11B50Fu, static_cast<uint64_t>(which++)}).next_u64();
        // listing inside marked blocks is already the direct scan once the
        // block size is at or below the cutoff; otherwise detect once more
        // within each marked block pair before scanning
        const DetectionReport rep =
            params.t <= opts.scan_cutoff
                ? find_outliers(inst.a, inst.b, params, sub_seed)
                : find_outliers_two_level(inst.a, inst.b, params, gamma, sub_seed);
        for (const OutlierPair& pr : rep.pairs) {
            int64_t j1 = inst.a_index[pr.j1];
            int64_t j2 = inst.b_index[pr.j2];
            if (j1 > j2) std::swap(j1, j2);
            if (!found || std::abs(pr.ip) > std::abs(best.ip)) {
                best = {j1, j2, pr.ip};
                found = true;
            }
        }
    }
    if (!found) {
        throw NoPairFound("solve_lightbulb: no pair with |ip| >= rho*d found; "
                          "consider more iterations or a larger d");
    }
    const int64_t check = inner_product(data.col(best.j1), data.col(best.j2));
    if (check != best.ip || !meets_threshold(check, rho, data.dim())) {
        throw std::logic_error("solve_lightbulb: re-verification failed");
    }
    return best;
}

SplitLists build_split_lists(const std::vector<ParityExample>& examples, int64_t n, int64_t k,
                             int64_t budget) {
    if (k < 2) throw std::invalid_argument("build_split_lists: need k >= 2");
    if (examples.empty()) throw std::invalid_argument("build_split_lists: no examples");
    const int64_t k1 = k / 2, k2 = k - k1;
    if (binom(n, k1) + binom(n, k2) > budget) {
        throw std::invalid_argument("build_split_lists: subset count exceeds budget");
    }
    const int64_t d = static_cast<int64_t>(examples.size());

    SplitLists out;
    out.left_sets = all_subsets(n, k1);
    out.right_sets = all_subsets(n, k2);
    out.a = BooleanMatrix(d, static_cast<int64_t>(out.left_sets.size()));
    out.b = BooleanMatrix(d, static_cast<int64_t>(out.right_sets.size()));

    for (size_t c = 0; c < out.left_sets.size(); ++c) {
        for (int64_t i = 0; i < d; ++i) {
            int v = 1;
            for (int32_t j : out.left_sets[c]) v *= examples[i].x[j];
            out.a.set_entry(i, static_cast<int64_t>(c), v);
        }
    }
    for (size_t c = 0; c < out.right_sets.size(); ++c) {
        for (int64_t i = 0; i < d; ++i) {
            int v = examples[i].y;
            for (int32_t j : out.right_sets[c]) v *= examples[i].x[j];
            out.b.set_entry(i, static_cast<int64_t>(c), v);
        }
    }
    return out;
}

int64_t parity_correlation(const std::vector<ParityExample>& examples,
                           const std::vector<int32_t>& support) {
    int64_t sum = 0;
    for (const ParityExample& ex : examples) {
        int v = ex.y;
        for (int32_t j : support) v *= ex.x[j];
        sum += v;
    }
    return sum;
}

std::vector<int32_t> solve_parity(std::vector<ParityExample> examples, int64_t n, int64_t k,
                                  double eta, const SolverOptions& opts, ExampleSource more,
                                  uint64_t seed) {
    const double rho = std::abs(1.0 - 2.0 * eta);
    if (rho == 0.0) {
        throw std::invalid_argument("solve_parity: eta = 1/2 carries no signal");
    }
    const double delta = delta_from_epsilon(opts.epsilon, opts.omega);
    // rho = 1 (noiseless) makes rho^{1/delta} collapse onto rho; any
    // background level below 1 serves there
    const double tau = rho < 1.0 ? std::pow(rho, 1.0 / delta) : 0.5;
    const int64_t batch = static_cast<int64_t>(examples.size());

    for (int64_t round = 0; round <= opts.retry_cap; ++round) {
        const SplitLists lists = build_split_lists(examples, n, k);
        Parameters params = solver_parameters(lists.a.cols(), rho, tau, opts.overrides);
        const uint64_t round_seed =
            Rng::keyed(seed, {0x9A41Fu, static_cast<uint64_t>(round)}).next_u64();
        const DetectionReport rep = find_outliers(lists.a, lists.b, params, round_seed);

        const OutlierPair* best = nullptr;
        std::vector<int32_t> best_support;
        for (const OutlierPair& pr : rep.pairs) {
            std::vector<int32_t> support = symmetric_difference(
                lists.left_sets[pr.j1], lists.right_sets[pr.j2]);
            if (static_cast<int64_t>(support.size()) != k) continue;
            if (!best || std::abs(pr.ip) > std::abs(best->ip)) {
                best = &pr;
                best_support = std::move(support);
            }
        }
        if (best) {
            const int64_t corr = parity_correlation(examples, best_support);
            const int64_t d = static_cast<int64_t>(examples.size());
            if (meets_threshold(corr, rho, d)) {
                return best_support;
            }
        }
        if (round == opts.retry_cap || !more) break;
        examples = more(batch);
        if (examples.empty()) break;
    }
    throw NoPairFound("solve_parity: retries exhausted without an above-threshold pair");
}

OVTransform ov_transform(const OVInstance& inst) {
    if (inst.dprime < 1) throw std::invalid_argument("ov_transform: need dprime >= 1");
    const int64_t dp = inst.dprime, n = inst.n;
    const int64_t d = 4 * dp + 1;

    OVTransform out;
    out.rho = static_cast<double>(2 * dp + 1) / static_cast<double>(d);
    out.tau = static_cast<double>(2 * dp - 1) / static_cast<double>(d);
    out.a = BooleanMatrix(d, n);
    out.b = BooleanMatrix(d, n);
    for (int64_t j = 0; j < n; ++j) {
        for (int64_t i = 0; i < dp; ++i) {
            const int sx = inst.s_at(i, j) ? -1 : 1;  // 1-2x
            out.a.set_entry(4 * i + 0, j, 1);
            out.a.set_entry(4 * i + 1, j, sx);
            out.a.set_entry(4 * i + 2, j, 1);
            out.a.set_entry(4 * i + 3, j, sx);
            const int sy = inst.t_at(i, j) ? -1 : 1;  // 1-2y
            out.b.set_entry(4 * i + 0, j, 1);
            out.b.set_entry(4 * i + 1, j, 1);
            out.b.set_entry(4 * i + 2, j, sy);
            out.b.set_entry(4 * i + 3, j, -sy);       // 2y-1
        }
        out.a.set_entry(4 * dp, j, 1);
        out.b.set_entry(4 * dp, j, 1);
    }
    return out;
}

namespace {

int64_t ov_dot(const OVInstance& inst, int64_t j1, int64_t j2) {
    int64_t acc = 0;
    for (int64_t i = 0; i < inst.dprime; ++i) {
        acc += static_cast<int64_t>(inst.s_at(i, j1)) * inst.t_at(i, j2);
    }
    return acc;
}

}  // namespace

OVResult solve_ov(const OVInstance& inst, const SolverOptions& opts, uint64_t seed) {
    Rng rng = Rng::keyed(seed, {0x0F991u});
    for (int64_t trial = 0; trial < opts.presample_pairs; ++trial) {
        const int64_t j1 = static_cast<int64_t>(rng.next_below(inst.n));
        const int64_t j2 = static_cast<int64_t>(rng.next_below(inst.n));
        if (ov_dot(inst, j1, j2) == 0) return {true, j1, j2};
    }

    const OVTransform tf = ov_transform(inst);
    // desk-scale default: sqrt(s) odd so the sampled half-sums can never be
    // zero, which keeps the marking phase from dropping any block pair at
    // these tiny dimensions
    ParameterOverrides ov = opts.overrides;
    if (!ov.t) ov.t = 1;
    if (!ov.p) ov.p = 2;
    if (!ov.s) ov.s = 25;
    if (!ov.iterations) ov.iterations = 1;
    Parameters params = solver_parameters(inst.n, tf.rho, tf.tau, ov);

    const DetectionReport rep = find_outliers(tf.a, tf.b, params, seed);
    for (const OutlierPair& pr : rep.pairs) {
        if (ov_dot(inst, pr.j1, pr.j2) == 0) {
            return {true, pr.j1, pr.j2};
        }
    }
    return {false, 0, 0};
}

std::vector<ParityExample> gen_parity_examples(const std::vector<int32_t>& support, int64_t n,
                                               double eta, int64_t d, uint64_t seed) {
    if (!(eta >= 0.0 && eta < 1.0)) {
        throw std::invalid_argument("gen_parity_examples: eta out of range");
    }
    Rng rng = Rng::keyed(seed, {0x4A418u});
    std::vector<ParityExample> out(static_cast<size_t>(d));
    for (ParityExample& ex : out) {
        ex.x.resize(n);
        for (int64_t j = 0; j < n; ++j) {
            ex.x[j] = static_cast<int8_t>(rng.next_sign());
        }
        int prod = 1;
        for (int32_t j : support) prod *= ex.x[j];
        const int z = rng.next_unit() < eta ? -1 : 1;
        ex.y = static_cast<int8_t>(z * prod);
    }
    return out;
}

ParityInstance gen_parity(int64_t n, int64_t k, double eta, int64_t d, uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("gen_parity: need 1 <= k <= n");
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("gen_parity: eta out of range");
    Rng rng = Rng::keyed(seed, {0x4A417u});

    ParityInstance inst;
    inst.n = n;
    inst.k = k;
    inst.eta = eta;
    inst.seed = seed;
    std::vector<int32_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    inst.support.assign(all.begin(), all.begin() + k);
    std::sort(inst.support.begin(), inst.support.end());
    inst.examples = gen_parity_examples(inst.support, n, eta, d, rng.next_u64());
    return inst;
}

OVInstance gen_ov(int64_t dprime, int64_t n, double density, uint64_t seed) {
    if (dprime < 1 || n < 1) throw std::invalid_argument("gen_ov: bad shape");
    Rng rng = Rng::keyed(seed, {0x09Cu});
    OVInstance inst;
    inst.dprime = dprime;
    inst.n = n;
    inst.s_entries.assign(static_cast<size_t>(dprime * n), 0);
    inst.t_entries.assign(static_cast<size_t>(dprime * n), 0);
    for (auto& e : inst.s_entries) e = rng.next_unit() < density ? 1 : 0;
    for (auto& e : inst.t_entries) e = rng.next_unit() < density ? 1 : 0;
    return inst;
}

}  // namespace corrseek
