#include "corrseek/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace corrseek {

BooleanMatrix random_pm1_matrix(int64_t d, int64_t n, Rng& rng) {
    BooleanMatrix m(d, n);
    for (int64_t j = 0; j < n; ++j) {
        uint64_t* words = m.raw_sign(j);
        for (int64_t w = 0; w < m.words_per_col(); ++w) words[w] = rng.next_u64();
        // clear sign bits beyond d so equality comparisons stay canonical
        const int tail = static_cast<int>(d % 64);
        if (tail != 0) words[m.words_per_col() - 1] &= (1ULL << tail) - 1;
    }
    return m;
}

std::vector<OutlierPair> brute_force_pairs(const BooleanMatrix& a, const BooleanMatrix& b,
                                           double threshold_fraction) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("brute_force_pairs: dimension mismatch");
    }
    const int64_t n1 = a.cols(), n2 = b.cols(), d = a.dim();
    std::vector<std::vector<OutlierPair>> rows(n1);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t j1 = 0; j1 < n1; ++j1) {
        const ColumnView ca = a.col(j1);
        for (int64_t j2 = 0; j2 < n2; ++j2) {
            const int64_t ip = inner_product(ca, b.col(j2));
            if (meets_threshold(ip, threshold_fraction, d)) {
                rows[j1].push_back({j1, j2, ip});
            }
        }
    }
    std::vector<OutlierPair> out;
    for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
    return out;
}

std::vector<OutlierPair> brute_force_pairs_mono(const BooleanMatrix& data,
                                                double threshold_fraction) {
    const int64_t n = data.cols(), d = data.dim();
    std::vector<std::vector<OutlierPair>> rows(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t j1 = 0; j1 < n; ++j1) {
        const ColumnView ca = data.col(j1);
        for (int64_t j2 = j1 + 1; j2 < n; ++j2) {
            const int64_t ip = inner_product(ca, data.col(j2));
            if (meets_threshold(ip, threshold_fraction, d)) {
                rows[j1].push_back({j1, j2, ip});
            }
        }
    }
    std::vector<OutlierPair> out;
    for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
    return out;
}

namespace {

// copy column src of m into column dst with exactly `flips` sign flips at
// positions drawn without replacement
void plant_copy(BooleanMatrix& m_dst, int64_t dst, const BooleanMatrix& m_src, int64_t src,
                int64_t flips, Rng& rng) {
    const int64_t d = m_src.dim();
    std::vector<uint32_t> coords(d);
    std::iota(coords.begin(), coords.end(), 0);
    rng.shuffle(coords);
    for (int64_t i = 0; i < d; ++i) m_dst.set_entry(i, dst, m_src.entry(i, src));
    for (int64_t f = 0; f < flips; ++f) {
        const uint32_t i = coords[f];
        m_dst.set_entry(i, dst, -m_src.entry(i, src));
    }
}

}  // namespace

double lightbulb_unique_dim(int64_t n, double rho) {
    return 5.0 / (rho * rho) * std::log(static_cast<double>(n));
}

PlantedInstance gen_lightbulb(int64_t n, int64_t d, double rho, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_lightbulb: need n >= 2");
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("gen_lightbulb: rho must lie in (0,1]");
    }
    const int64_t flips = static_cast<int64_t>(std::floor((1.0 - rho) * d / 2.0));
    const int64_t target_ip = d - 2 * flips;
    if (!meets_threshold(target_ip, rho, d)) {
        throw std::invalid_argument("gen_lightbulb: d too small to realize ip >= rho*d");
    }

    Rng rng = Rng::keyed(seed, {0x11B01Bu});
    PlantedInstance inst;
    inst.bichromatic = false;
    inst.rho = rho;
    inst.seed = seed;
    inst.a = random_pm1_matrix(d, n, rng);

    int64_t j1 = static_cast<int64_t>(rng.next_below(n));
    int64_t j2 = static_cast<int64_t>(rng.next_below(n - 1));
    if (j2 >= j1) ++j2;
    if (j1 > j2) std::swap(j1, j2);
    plant_copy(inst.a, j2, inst.a, j1, flips, rng);
    inst.planted.push_back({j1, j2, target_ip});
    inst.q_observed = static_cast<int64_t>(brute_force_pairs_mono(inst.a, rho).size());
    return inst;
}

PlantedInstance gen_promise_instance(int64_t n, int64_t d, double rho, double tau,
                                     int64_t n_outliers, uint64_t seed) {
    if (!(tau < rho)) throw std::invalid_argument("gen_promise_instance: need tau < rho");
    if (n_outliers < 0 || n_outliers > n) {
        throw std::invalid_argument("gen_promise_instance: bad n_outliers");
    }
    Rng rng = Rng::keyed(seed, {0x9120413u});
    PlantedInstance inst;
    inst.rho = rho;
    inst.tau = tau;
    inst.seed = seed;
    inst.a = random_pm1_matrix(d, n, rng);
    inst.b = random_pm1_matrix(d, n, rng);

    const int64_t flips = static_cast<int64_t>(std::floor((1.0 - rho) * d / 2.0));
    const int64_t target_ip = d - 2 * flips;
    std::vector<uint32_t> order_a(n), order_b(n);
    std::iota(order_a.begin(), order_a.end(), 0);
    std::iota(order_b.begin(), order_b.end(), 0);
    rng.shuffle(order_a);
    rng.shuffle(order_b);
    std::vector<bool> is_planted_a(n, false), is_planted_b(n, false);
    for (int64_t o = 0; o < n_outliers; ++o) {
        const int64_t j1 = order_a[o];
        const int64_t j2 = order_b[o];
        plant_copy(inst.b, j2, inst.a, j1, flips, rng);
        inst.planted.push_back({j1, j2, target_ip});
        is_planted_a[j1] = true;
        is_planted_b[j2] = true;
    }

    // audit, then repair offending background columns; a full redraw would
    // almost never pass once n^2 * P(|ip| > tau d) exceeds 1
    auto is_planted_pair = [&](int64_t j1, int64_t j2) {
        for (const PlantedPair& pp : inst.planted) {
            if (pp.j1 == j1 && pp.j2 == j2) return true;
        }
        return false;
    };
    const int64_t max_rounds = 64;
    for (int64_t round = 0;; ++round) {
        std::vector<OutlierPair> above = brute_force_pairs(inst.a, inst.b, tau);
        std::vector<OutlierPair> violations;
        for (const OutlierPair& pr : above) {
            if (!is_planted_pair(pr.j1, pr.j2)) violations.push_back(pr);
        }
        if (violations.empty()) {
            inst.q_observed = static_cast<int64_t>(above.size());
            break;
        }
        if (round >= max_rounds) {
            throw std::runtime_error(
                "gen_promise_instance: repair budget exhausted; d too small for requested tau (" +
                std::to_string(violations.size()) + " violations left)");
        }
        for (const OutlierPair& pr : violations) {
            // resample a non-planted side; re-plant when both sides are planted
            if (!is_planted_b[pr.j2]) {
                for (int64_t i = 0; i < d; ++i) {
                    inst.b.set_entry(i, pr.j2, rng.next_sign());
                }
            } else if (!is_planted_a[pr.j1]) {
                for (int64_t i = 0; i < d; ++i) {
                    inst.a.set_entry(i, pr.j1, rng.next_sign());
                }
            } else {
                for (PlantedPair& pp : inst.planted) {
                    if (pp.j2 == pr.j2) {
                        for (int64_t i = 0; i < d; ++i) {
                            inst.a.set_entry(i, pp.j1, rng.next_sign());
                        }
                        plant_copy(inst.b, pp.j2, inst.a, pp.j1, flips, rng);
                    }
                }
            }
        }
    }
    return inst;
}

ConcentrationReport check_cartesian_concentration(int64_t m, int64_t s, double xi, double eta,
                                                  int64_t trials, uint64_t seed) {
    if (!is_perfect_square(m) || !is_perfect_square(s) || m < 1 || s < 1) {
        throw std::invalid_argument("check_cartesian_concentration: m and s must be squares");
    }
    if (std::abs(xi) > 1.0 || std::abs(eta) > 1.0) {
        throw std::invalid_argument("check_cartesian_concentration: xi, eta must lie in [-1,1]");
    }
    const int64_t root_m = isqrt_exact(m);
    const int64_t root_s = isqrt_exact(s);

    // realize the requested mean on the lattice of feasible sums: sum of
    // root_m signs has the parity of root_m
    auto realize = [&](double target, std::vector<int>& v) {
        auto plus = static_cast<int64_t>(std::llround((1.0 + target) * root_m / 2.0));
        plus = std::clamp<int64_t>(plus, 0, root_m);
        v.assign(root_m, -1);
        for (int64_t i = 0; i < plus; ++i) v[i] = 1;
        return static_cast<double>(2 * plus - root_m) / static_cast<double>(root_m);
    };

    ConcentrationReport rep;
    rep.m = m;
    rep.s = s;
    rep.trials = trials;
    rep.xi_requested = xi;
    rep.eta_requested = eta;
    std::vector<int> x, y;
    rep.xi = realize(xi, x);
    rep.eta = realize(eta, y);

    const double ln_s = std::log(static_cast<double>(s));
    const double axi = std::abs(rep.xi), aeta = std::abs(rep.eta);
    const double sd = static_cast<double>(s);
    rep.upper_bound = axi * aeta * sd + (axi + aeta) * std::pow(sd, 0.75) * ln_s +
                      std::sqrt(sd) * ln_s * ln_s;
    rep.lower_bound = axi * aeta * sd - (axi + aeta) * std::pow(sd, 0.75) * ln_s +
                      std::sqrt(sd) * ln_s * ln_s;
    rep.lower_applicable = axi >= std::pow(sd, -0.25) * ln_s && aeta >= std::pow(sd, -0.25) * ln_s;

    Rng rng = Rng::keyed(seed, {0xCA27Eu});
    for (int64_t trial = 0; trial < trials; ++trial) {
        int64_t sum_x = 0, sum_y = 0;
        for (int64_t i = 0; i < root_s; ++i) sum_x += x[rng.next_below(root_m)];
        for (int64_t i = 0; i < root_s; ++i) sum_y += y[rng.next_below(root_m)];
        const double stat = std::abs(static_cast<double>(sum_x) * static_cast<double>(sum_y));
        if (stat > rep.upper_bound) ++rep.upper_violations;
        if (rep.lower_applicable && stat < rep.lower_bound) ++rep.lower_violations;
    }
    return rep;
}

SeparationReport estimate_signal_separation(const PlantedInstance& instance,
                                            const Parameters& params, int64_t trials,
                                            uint64_t seed) {
    const BooleanMatrix& a = instance.a;
    const BooleanMatrix& b = instance.bichromatic ? instance.b : instance.a;
    const BooleanMatrix pa = pad_to_multiple(a, params.t);
    const BooleanMatrix pb = pad_to_multiple(b, params.t);

    SeparationReport rep;
    rep.trials = trials;
    rep.threshold = params.threshold_constant *
                    std::pow(params.rho, static_cast<double>(params.p)) *
                    static_cast<double>(params.s);

    int64_t planted_above = 0, background_below = 0;
    double planted_sum = 0.0, background_sum = 0.0;
    for (int64_t trial = 0; trial < trials; ++trial) {
        const uint64_t trial_seed = Rng::keyed(seed, {0x5E9412u, static_cast<uint64_t>(trial)}).next_u64();
        const IterationPlan plan = setup_iteration(pa.padded_cols(), pa.dim(), params, trial_seed);
        const CompressedMatrix hat_a = compress(pa, plan, plan.signs_alpha);
        const CompressedMatrix hat_b = compress(pb, plan, plan.signs_beta);
        const IntMatrix product = gemm_int_tn(hat_a.values, hat_b.values);

        std::vector<int64_t> block_of(pa.padded_cols());
        for (int64_t k = 0; k < plan.block_count(); ++k) {
            for (uint32_t j : plan.block(k)) block_of[j] = k;
        }
        std::vector<std::pair<int64_t, int64_t>> planted_blocks;
        for (const PlantedPair& pp : instance.planted) {
            planted_blocks.emplace_back(block_of[pp.j1], block_of[pp.j2]);
        }
        int64_t planted_min = 0;
        bool planted_set = false;
        int64_t background_max = 0;
        for (int64_t k1 = 0; k1 < plan.block_count(); ++k1) {
            for (int64_t k2 = 0; k2 < plan.block_count(); ++k2) {
                const int64_t score = std::abs(product.at(k1, k2));
                const bool is_planted =
                    std::find(planted_blocks.begin(), planted_blocks.end(),
                              std::make_pair(k1, k2)) != planted_blocks.end();
                if (is_planted) {
                    planted_min = planted_set ? std::min(planted_min, score) : score;
                    planted_set = true;
                } else {
                    background_max = std::max(background_max, score);
                }
            }
        }
        rep.planted_min_scores.push_back(planted_set ? planted_min : 0);
        rep.background_max_scores.push_back(background_max);
        if (planted_set && static_cast<double>(planted_min) >= rep.threshold) ++planted_above;
        if (static_cast<double>(background_max) < rep.threshold) ++background_below;
        planted_sum += planted_set ? static_cast<double>(planted_min) : 0.0;
        background_sum += static_cast<double>(background_max);
    }
    if (trials > 0) {
        rep.frac_planted_above = static_cast<double>(planted_above) / static_cast<double>(trials);
        rep.frac_background_below =
            static_cast<double>(background_below) / static_cast<double>(trials);
        rep.mean_planted = planted_sum / static_cast<double>(trials);
        rep.mean_background_max = background_sum / static_cast<double>(trials);
    }
    return rep;
}

}  // namespace corrseek
