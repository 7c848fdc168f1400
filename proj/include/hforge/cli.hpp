#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hforge/spectral.hpp"

namespace hforge::cli {

enum class Format { Text, Latex, Json };

struct JobConfig {
    std::string command; // gen, verify, table
    std::string suite;   // verify only
    std::string model = "kdv";
    std::optional<int> n; // block count; kdv forces 1, coupled 2, multi requires it
    int order = 1;
    int max = 2;          // index bound of the hamiltonian and symmetry suites
    std::string lie_case; // empty: every case
    std::string epsilon, sigma, alpha, alpha1, alpha2, beta1; // empty: symbolic
    bool iso = false;
    bool leading_seed = false; // multi seeds (β1, 0, …, 0)
    int pairs = 20;            // random hereditary pairs
    unsigned seed = 2024;
    bool timing = false;
    Format format = Format::Text;
    std::string out; // empty: stdout
};

// Builds and validates the spectral model of a configuration. Throws BadModel
// or BadSpec.
SpectralModel model_of(const JobConfig &cfg);

// Order cap from HIERARCHY_FORGE_MAX_ORDER, or the default when unset.
int max_order();
inline constexpr int kDefaultMaxOrder = 8;

// Exit codes: 0 no hard failures, 1 hard verification failures, 2 invalid
// configuration or computation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailures = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line given without the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace hforge::cli
