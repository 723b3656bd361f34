#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jls/joint.hpp"

// Deterministic data generators for the simulation models and the drivers
// behind the type-1-error and power experiments. Identical grid (including
// the seed) gives a bit-identical output table for any worker count:
// replicate r of cell c always draws from stream mix64(mix64(seed, c), r).

namespace jls::sim {

enum class Model { none, i, ii, iii };  // `none` is the null model

struct SimulationSpec {
    Model model = Model::none;
    std::int64_t n = 0;
    std::optional<double> maf;                          // HWE draws, or
    std::optional<std::array<std::int64_t, 3>> sizes;   // fixed group sizes
    double beta_g = 0.0;
    double beta_e1 = 0.0;
    double beta_e2 = 0.0;
    double beta_ge1 = 0.0;
    double beta_ge2 = 0.0;
    double f1 = 0.3;  // exposure frequencies, in (0, 1]
    double f2 = 0.3;
    std::uint64_t seed = 0;
};

// Throws std::invalid_argument on an inconsistent spec (both or neither of
// maf/sizes, sizes not summing to n, maf outside (0, 0.5], ...).
void validate(const SimulationSpec& spec);

struct Dataset {
    std::vector<std::int8_t> geno;
    std::vector<double> y;
    // Hidden exposures, retained for generator tests only; the testing
    // pipeline sees genotype and phenotype alone.
    std::vector<std::int8_t> e1, e2;
};

std::vector<std::int8_t> gen_genotypes_hwe(double maf, std::int64_t n, std::uint64_t seed);
std::vector<std::int8_t> gen_genotypes_fixed(std::int64_t n0, std::int64_t n1,
                                             std::int64_t n2, std::uint64_t seed);

Dataset simulate_dataset(const SimulationSpec& spec);

struct TestSelection {
    bool reg = true;     // OLS slope t-test
    bool levene = true;
    bool fisher = true;
    bool minp = true;
    bool lrt = true;
};

struct ExperimentGrid {
    std::vector<SimulationSpec> cells;
    std::vector<std::string> labels;  // optional, parallel to cells
    std::int64_t replicates = 1;
    std::vector<double> alphas{0.05};
    TestSelection tests;
    joint::TestConfig config;
    bool int_transform = false;       // rank-INT each replicate before testing
    std::int64_t perm_replicates = 0; // when > 0, also estimate permutation power
    joint::PermConvention perm_convention = joint::PermConvention::add_one;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct RateRow {
    std::string cell;
    std::string test;
    std::string mode;  // "asymptotic" | "permutation"
    double alpha = 0.0;
    std::int64_t rejections = 0;
    std::int64_t evaluated = 0;   // replicates with a usable p-value
    std::int64_t degenerate = 0;

    double rate() const {
        return evaluated > 0 ? static_cast<double>(rejections) / static_cast<double>(evaluated)
                             : std::numeric_limits<double>::quiet_NaN();
    }
    // Binomial standard error at the observed rate.
    double se() const;
};

// Empirical rejection rates per (cell, test, alpha). The same engine serves
// both experiments; the names document intent and defaults.
std::vector<RateRow> run_type1_grid(const ExperimentGrid& grid);
std::vector<RateRow> run_power_grid(const ExperimentGrid& grid);

}  // namespace jls::sim
