#pragma once

#include <cstdint>
#include <vector>

#include "corrseek/boolmat.hpp"
#include "corrseek/corrjoin.hpp"
#include "corrseek/params.hpp"
#include "corrseek/rng.hpp"

namespace corrseek {

struct PlantedPair {
    int64_t j1 = 0;
    int64_t j2 = 0;
    int64_t ip = 0;
};

/// Instance built to satisfy the (rho, tau, q) promise, with its ground
/// truth attached. For monochromatic instances (light bulb) only `a` is
/// populated and the planted indices refer to its columns.
struct PlantedInstance {
    BooleanMatrix a;
    BooleanMatrix b;
    bool bichromatic = true;
    std::vector<PlantedPair> planted;
    double rho = 0.0;
    double tau = 0.0;
    int64_t q_observed = 0;
    uint64_t seed = 0;
};

/// All (j1, j2) with |<a_j1, b_j2>| >= fraction * d, exact and sorted.
/// This is the ground-truth oracle the detection pipeline is checked against.
std::vector<OutlierPair> brute_force_pairs(const BooleanMatrix& a, const BooleanMatrix& b,
                                           double threshold_fraction);

/// Monochromatic convenience: unordered pairs of distinct columns, j1 < j2.
std::vector<OutlierPair> brute_force_pairs_mono(const BooleanMatrix& data,
                                                double threshold_fraction);

/// n-2 i.i.d. uniform columns plus one planted pair made by copying a column
/// and flipping exactly floor((1-rho)d/2) coordinates, so the planted inner
/// product is d - 2*floor((1-rho)d/2) >= rho*d exactly.
PlantedInstance gen_lightbulb(int64_t n, int64_t d, double rho, uint64_t seed);

/// Bichromatic promise instance: i.i.d. background, n_outliers planted
/// pairs, then audited and locally repaired until the planted pairs are the
/// only pairs above tau*d. Throws when the repair budget runs out.
PlantedInstance gen_promise_instance(int64_t n, int64_t d, double rho, double tau,
                                     int64_t n_outliers, uint64_t seed);

struct ConcentrationReport {
    int64_t trials = 0;
    int64_t upper_violations = 0;
    int64_t lower_violations = 0;
    bool lower_applicable = false;
    int64_t m = 0;
    int64_t s = 0;
    double xi_requested = 0.0, eta_requested = 0.0;
    double xi = 0.0, eta = 0.0;  // realized (feasible) values
    double upper_bound = 0.0, lower_bound = 0.0;
};

/// Monte-Carlo check of the Cartesian sampling bounds: builds sign vectors
/// with the requested means (snapped to the nearest feasible lattice point),
/// samples S1 x S2 per trial and counts bound violations. Natural logs; a
/// statistic exactly on a bound counts as a non-violation.
ConcentrationReport check_cartesian_concentration(int64_t m, int64_t s, double xi, double eta,
                                                  int64_t trials, uint64_t seed);

struct SeparationReport {
    int64_t trials = 0;
    double threshold = 0.0;
    std::vector<int64_t> planted_min_scores;   // per trial: min over planted pairs
    std::vector<int64_t> background_max_scores;
    double frac_planted_above = 0.0;
    double frac_background_below = 0.0;
    double mean_planted = 0.0;
    double mean_background_max = 0.0;
};

/// Runs setup+compress+detect over independent trials and reports the score
/// distribution for blocks holding planted pairs vs pure background blocks.
/// The knob-tuning aid for explicit-mode parameters.
SeparationReport estimate_signal_separation(const PlantedInstance& instance,
                                            const Parameters& params, int64_t trials,
                                            uint64_t seed);

/// Uniform {-1,+1} matrix.
BooleanMatrix random_pm1_matrix(int64_t d, int64_t n, Rng& rng);

/// Advised dimension below which the light bulb planted pair may not be the
/// unique above-threshold pair: 5 * rho^-2 * ln n.
double lightbulb_unique_dim(int64_t n, double rho);

}  // namespace corrseek
