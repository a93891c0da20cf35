#pragma once

#include <string>
#include <vector>

#include "corrseek/apps.hpp"
#include "corrseek/boolmat.hpp"

namespace corrseek {

/// PMAT1 (text): header "PMAT1 d n", then n lines of d characters in {+,-},
/// one line per column. PMATB1 (binary): header "PMATB1 d n\n", then per
/// column the sign plane and the presence plane as little-endian u64 words.
/// Only the n logical columns are written; padding is a runtime transform.
void save_pmat(const BooleanMatrix& m, const std::string& path, bool binary = false);
BooleanMatrix load_pmat(const std::string& path);

/// PARITY1: header "PARITY1 n d", then d lines "<n chars of +->\t<+|->"
void save_parity_examples(const std::vector<ParityExample>& examples, int64_t n,
                          const std::string& path);
std::vector<ParityExample> load_parity_examples(const std::string& path, int64_t& n_out);

/// OV1: header "OV1 dprime n" then n lines of dprime chars in {0,1} for S,
/// repeated for T.
void save_ov(const OVInstance& inst, const std::string& path);
OVInstance load_ov(const std::string& path);

}  // namespace corrseek
