#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "jls/geneset.hpp"
#include "jls/joint.hpp"
#include "jls/simulate.hpp"
#include "jls/types.hpp"

// File ingestion, sample reconciliation, the scan orchestrator and result
// serialization. All formats are TSV (tab 0x09, newline 0x0A, UTF-8) with
// the literal `NA` for missing values.

namespace jls::io {

// Malformed input; message carries file and line number.
struct LoadError : std::runtime_error {
    explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

struct PhenotypeTable {
    std::vector<std::string> sample_ids;
    std::vector<double> values;    // NaN for NA
    std::vector<std::int8_t> sex;  // 1 = male, 2 = female, 0 = unknown
    bool has_sex = false;
};

// Header `sample_id<TAB>phenotype[<TAB>sex]`; duplicate ids rejected.
PhenotypeTable load_phenotypes(const std::string& path);

struct GenotypeMatrix {
    std::vector<std::string> sample_ids;
    std::vector<GenotypeVector> variants;
    std::unordered_map<std::string, std::size_t> by_id;
};

// Header `variant_id<TAB>chrom<TAB>sample ids...`, one variant per row with
// codes in {0,1,2,NA}. When `sex_source` is given, X-chromosome rows are
// checked: males must be coded 0, 2 or NA.
GenotypeMatrix load_genotypes(const std::string& path,
                              const PhenotypeTable* sex_source = nullptr);

// GMT-style: `set_id<TAB>description<TAB>variant ids...`.
std::vector<geneset::GeneSet> load_genesets(const std::string& path);

// Samples present in both files, in genotype-file order. Alignment is by
// id only; column order never matters.
struct SampleFrame {
    std::vector<std::string> ids;
    std::vector<double> phenotype;
    std::vector<std::uint32_t> geno_col;  // column index into matrix rows
    std::int64_t pheno_only = 0;          // reconciliation counts
    std::int64_t geno_only = 0;
};

SampleFrame reconcile(const PhenotypeTable& pheno, const GenotypeMatrix& geno);

enum class PValueMode { asymptotic, permutation };

struct ScanConfig {
    std::string pheno_path;
    std::string geno_path;
    joint::TestConfig tests;
    PValueMode mode = PValueMode::asymptotic;
    std::int64_t permutation_replicates = 1000;
    joint::PermConvention convention = joint::PermConvention::add_one;
    bool int_transform = false;
    double int_offset = 0.375;
    double flag_threshold = 5e-8;  // flags variants with p_fisher at or below
    std::uint64_t seed = 0;
    int threads = 1;
};

struct ScanReport {
    std::vector<joint::JlsResult> results;
    std::vector<double> perm_fisher;  // permutation-mode p's, parallel to results
    std::vector<double> perm_minp;
    std::vector<double> perm_lrt;
    std::int64_t samples_used = 0;
    std::int64_t pheno_only = 0;
    std::int64_t geno_only = 0;
    std::int64_t flagged = 0;
    std::int64_t degenerate = 0;
};

ScanReport run_scan(const ScanConfig& config);

// 6-decimal scientific notation with a compact exponent (1.382300e-1),
// `NA` for missing; statistics use shortest-round-trip general format.
std::string format_p(double p);
std::string format_stat(double v);

// Exact column set, rows in input variant order:
// variant_id chrom n_used p_loc p_scale w_fisher p_fisher w_minp p_minp p_lrt status
void write_results(const ScanReport& report, std::ostream& os);
void write_results(const ScanReport& report, const std::string& path);

// Round-trips a results file (used by tests and downstream tooling).
struct ResultRow {
    std::string variant_id, chrom, status;
    std::int64_t n_used;
    double p_loc, p_scale, w_fisher, p_fisher, w_minp, p_minp, p_lrt;
};
std::vector<ResultRow> read_results(const std::string& path);

// Long-format rate table from the experiment drivers:
// cell test mode alpha rate se rejections evaluated degenerate
void write_rate_table(const std::vector<sim::RateRow>& rows, std::ostream& os);
void write_rate_table(const std::vector<sim::RateRow>& rows, const std::string& path);

// Gene-set result summary plus its per-SNP table.
void write_geneset_results(const std::vector<geneset::Result>& results, std::ostream& os);
void write_geneset_results(const std::vector<geneset::Result>& results, const std::string& path);

// Phenotype table writer (used by `transform` and `simulate`).
void write_phenotypes(const PhenotypeTable& table, const std::string& path);
void write_genotypes(const GenotypeMatrix& matrix, const std::string& path);

}  // namespace jls::io
