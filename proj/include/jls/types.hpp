#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace jls {

// Genotype codes are minor-allele counts; -1 marks a missing call.
inline constexpr std::int8_t kMissing = -1;

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

struct GenotypeVector {
    std::string variant_id;
    std::string chrom;
    std::vector<std::int8_t> codes;  // 0, 1, 2 or kMissing
};

struct PhenotypeVector {
    std::vector<std::string> sample_ids;  // may be empty for simulated data
    std::vector<double> values;           // NaN marks a missing value
};

enum class TestStatus { ok, degenerate };

struct TestOutcome {
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double p = std::numeric_limits<double>::quiet_NaN();
    double df1 = 0.0;
    double df2 = 0.0;
    std::int64_t n_used = 0;
    TestStatus status = TestStatus::degenerate;

    bool ok() const { return status == TestStatus::ok; }
};

}  // namespace jls
