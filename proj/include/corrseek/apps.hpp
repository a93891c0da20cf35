#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "corrseek/boolmat.hpp"
#include "corrseek/corrjoin.hpp"
#include "corrseek/params.hpp"

namespace corrseek {

/// One labelled example: x in {-1,+1}^n with label y = z * prod_{j in S} x_j,
/// where z = -1 with probability eta.
struct ParityExample {
    std::vector<int8_t> x;
    int8_t y = 1;
};

struct ParityInstance {
    int64_t n = 0;
    int64_t k = 0;
    double eta = 0.0;
    std::vector<ParityExample> examples;
    std::vector<int32_t> support;  // generator-side ground truth
    uint64_t seed = 0;
};

/// 0/1 matrices S, T of shape dprime x n, column-major bit layout left to
/// the builder; entries accessed through s_at/t_at.
struct OVInstance {
    int64_t dprime = 0;
    int64_t n = 0;
    std::vector<uint8_t> s_entries;  // dprime x n, column-major
    std::vector<uint8_t> t_entries;

    uint8_t s_at(int64_t i, int64_t j) const { return s_entries[j * dprime + i]; }
    uint8_t t_at(int64_t i, int64_t j) const { return t_entries[j * dprime + i]; }
    void set_s(int64_t i, int64_t j, uint8_t v) { s_entries[j * dprime + i] = v; }
    void set_t(int64_t i, int64_t j, uint8_t v) { t_entries[j * dprime + i] = v; }
};

struct SolverOptions {
    double epsilon = 0.5;          // accuracy knob feeding delta
    double omega = 2.3728639;      // square MM exponent used in delta
    ParameterOverrides overrides;  // explicit (t, p, s, iterations) etc.
    int64_t scan_cutoff = 64;      // block size below which listing scans directly
    int64_t retry_cap = 16;        // parity: extra example rounds
    int64_t presample_pairs = 0;   // ov: random pairs tested before detection
};

/// delta = 9 eps / (2 omega + 3 eps), the largest value keeping the
/// detection exponent within eps of 2 omega / 3.
double delta_from_epsilon(double epsilon, double omega);

struct LightbulbResult {
    int64_t j1 = 0;
    int64_t j2 = 0;
    int64_t ip = 0;
};

/// Monochromatic reduction + detection with tau = rho^{1/delta}, recursing
/// into marked blocks until they are small enough to scan directly. Returns
/// the max-|ip| pair found; throws NoPairFound otherwise.
LightbulbResult solve_lightbulb(const BooleanMatrix& data, double rho, const SolverOptions& opts,
                                uint64_t seed);

class NoPairFound : public std::runtime_error {
public:
    explicit NoPairFound(const std::string& what) : std::runtime_error(what) {}
};

struct SplitLists {
    BooleanMatrix a;  // one column per floor(k/2)-subset, entries x_J1
    BooleanMatrix b;  // one column per ceil(k/2)-subset, entries x_J2 * y
    std::vector<std::vector<int32_t>> left_sets;
    std::vector<std::vector<int32_t>> right_sets;
};

/// Valiant's split-and-list encoding; d = number of examples.
SplitLists build_split_lists(const std::vector<ParityExample>& examples, int64_t n, int64_t k,
                             int64_t budget = int64_t{1} << 22);

/// Called when a round fails; must return `count` fresh examples.
using ExampleSource = std::function<std::vector<ParityExample>(int64_t count)>;

/// Split-and-list + detection with rho = |1-2 eta|; on failure draws a fresh
/// batch from `more` up to opts.retry_cap rounds. Returns the support set.
std::vector<int32_t> solve_parity(std::vector<ParityExample> examples, int64_t n, int64_t k,
                                  double eta, const SolverOptions& opts, ExampleSource more,
                                  uint64_t seed);

struct OVTransform {
    BooleanMatrix a;
    BooleanMatrix b;
    double rho = 0.0;  // (2d'+1)/(4d'+1)
    double tau = 0.0;  // (2d'-1)/(4d'+1)
};

/// The 4-row gadget u/v per 0/1 entry plus one all-ones row: afterwards
/// |<a_j1, b_j2>| >= rho*(4d'+1) iff <s_j1, t_j2> = 0 over the integers.
OVTransform ov_transform(const OVInstance& inst);

struct OVResult {
    bool found = false;
    int64_t j1 = 0;
    int64_t j2 = 0;
};

/// Decides whether an orthogonal pair exists, with a witness. Optional
/// random pre-sampling, then the detection pipeline on the transform.
OVResult solve_ov(const OVInstance& inst, const SolverOptions& opts, uint64_t seed);

/// Generators for the two application problems.
ParityInstance gen_parity(int64_t n, int64_t k, double eta, int64_t d, uint64_t seed);

/// Examples from a fixed, known support; the retry loop's generator-backed
/// source must keep drawing from the same hidden function.
std::vector<ParityExample> gen_parity_examples(const std::vector<int32_t>& support, int64_t n,
                                               double eta, int64_t d, uint64_t seed);
OVInstance gen_ov(int64_t dprime, int64_t n, double density, uint64_t seed);

/// Empirical correlation sum_i prod_{j in S} x_j * y over the examples.
int64_t parity_correlation(const std::vector<ParityExample>& examples,
                           const std::vector<int32_t>& support);

}  // namespace corrseek
