// Command-line surface: scan, geneset, simulate, calibrate, power, transform.
// Exit codes: 0 success, 1 usage/config error, 2 data validation error,
// 3 runtime failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jls/io.hpp"
#include "jls/kernels.hpp"
#include "jls/rng.hpp"
#include "jls/simulate.hpp"
#include "jls/transform.hpp"

namespace {

using jls::joint::LocationTest;
using jls::joint::PermConvention;

struct CommonOpts {
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = all hardware threads
    std::string out;
};

std::string g_config_path;  // consumed before CLI11 parsing

void add_common(CLI::App* cmd, CommonOpts& opts) {
    // Later occurrences win, so config-file values expand first and
    // explicit flags override them.
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--seed", opts.seed, "Master seed (64-bit)")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker count (0 = hardware)")
        ->capture_default_str();
    cmd->add_option("--out,-o", opts.out, "Output path (default: stdout)");
    cmd->add_option("--config", g_config_path, "Config file with key = value lines");
}

// Expands `key = value` lines from --config into synthetic tokens placed
// right after the subcommand name; explicit flags keep precedence because
// every option takes its last occurrence.
std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    std::size_t sub_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (sub_pos == args.size() && !args[i].empty() && args[i][0] != '-') {
            sub_pos = i;
            continue;
        }
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || sub_pos == args.size()) return args;

    std::ifstream in(path);
    if (!in) throw CLI::FileError(path + ": cannot open config file");
    std::vector<std::string> expanded(args.begin(), args.begin() + sub_pos + 1);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string trimmed = strip(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw CLI::FileError(path + ":" + std::to_string(line_no) +
                                 ": expected key = value");
        const std::string key = strip(trimmed.substr(0, eq));
        const std::string value = strip(trimmed.substr(eq + 1));
        if (key.empty())
            throw CLI::FileError(path + ":" + std::to_string(line_no) + ": empty key");
        // single token so flags and valued options both parse
        expanded.push_back(value.empty() ? "--" + key : "--" + key + "=" + value);
    }
    expanded.insert(expanded.end(), args.begin() + sub_pos + 1, args.end());
    return expanded;
}

// JLS_OUT_DIR redirects relative output paths.
std::string resolve_out(const std::string& path) {
    if (path.empty()) return path;
    const char* dir = std::getenv("JLS_OUT_DIR");
    if (!dir || *dir == '\0') return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

struct TestOpts {
    std::string location = "ols";
    std::string scale = "levene-mean";
    int min_group = 2;
    bool run_lrt = true;
};

void add_test_opts(CLI::App* cmd, TestOpts& opts) {
    cmd->add_option("--location", opts.location, "Location test: ols | anova")
        ->check(CLI::IsMember({"ols", "anova"}))
        ->capture_default_str();
    cmd->add_option("--scale", opts.scale, "Scale test: levene-mean | levene-median")
        ->check(CLI::IsMember({"levene-mean", "levene-median"}))
        ->capture_default_str();
    cmd->add_option("--min-group", opts.min_group,
                    "Smallest group size used by the scale test and LRT")
        ->capture_default_str();
    cmd->add_flag("--lrt,!--no-lrt", opts.run_lrt, "Run the joint mean-variance LRT")
        ->capture_default_str();
}

jls::joint::TestConfig to_config(const TestOpts& opts) {
    jls::joint::TestConfig cfg;
    cfg.location = opts.location == "anova" ? LocationTest::anova : LocationTest::ols;
    cfg.scale.center = opts.scale == "levene-median" ? jls::assoc::LeveneCenter::median
                                                     : jls::assoc::LeveneCenter::mean;
    cfg.scale.min_group_size = opts.min_group;
    cfg.run_lrt = opts.run_lrt;
    return cfg;
}

PermConvention to_convention(const std::string& name) {
    return name == "paper-strict" ? PermConvention::paper_strict : PermConvention::add_one;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // a:b:step expands to an inclusive grid
        const std::size_t c1 = item.find(':');
        if (c1 != std::string::npos) {
            const std::size_t c2 = item.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw CLI::ValidationError(std::string(what), "range must be from:to:step");
            const double from = std::stod(item.substr(0, c1));
            const double to = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
            const double step = std::stod(item.substr(c2 + 1));
            if (!(step > 0.0)) throw CLI::ValidationError(std::string(what), "step must be > 0");
            for (double v = from; v <= to + 1e-9 * step; v += step)
                out.push_back(std::fabs(v) < 1e-12 ? 0.0 : v);
            continue;
        }
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what), "empty list");
    return out;
}

std::array<std::int64_t, 3> parse_sizes(const std::string& text) {
    std::array<std::int64_t, 3> out{};
    std::stringstream ss(text);
    std::string item;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(ss, item, ','))
            throw CLI::ValidationError("--sizes", "expected n0,n1,n2");
        out[i] = std::stoll(item);
    }
    if (std::getline(ss, item, ','))
        throw CLI::ValidationError("--sizes", "expected exactly three sizes");
    return out;
}

jls::sim::Model parse_model(const std::string& name) {
    if (name == "null") return jls::sim::Model::none;
    if (name == "i") return jls::sim::Model::i;
    if (name == "ii") return jls::sim::Model::ii;
    if (name == "iii") return jls::sim::Model::iii;
    throw CLI::ValidationError("--model", "must be null, i, ii or iii");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

template <typename WriteFn>
void emit(const CommonOpts& common, WriteFn&& write) {
    const std::string path = resolve_out(common.out);
    if (path.empty()) {
        write(std::cout);
    } else {
        std::ofstream out = open_out(path);
        write(out);
        out.flush();
        if (!out) throw std::runtime_error(path + ": write failed");
    }
}

// ---------------------------------------------------------------- scan

struct ScanOpts {
    CommonOpts common;
    TestOpts tests;
    std::string pheno, geno;
    std::string mode = "asymptotic";
    std::int64_t permutations = 1000;
    std::string convention = "add-one";
    bool int_transform = false;
    double int_offset = 0.375;
    double alpha = 5e-8;
};

int run_scan_cmd(const ScanOpts& opts) {
    jls::io::ScanConfig cfg;
    cfg.pheno_path = opts.pheno;
    cfg.geno_path = opts.geno;
    cfg.tests = to_config(opts.tests);
    cfg.mode = opts.mode == "permutation" ? jls::io::PValueMode::permutation
                                          : jls::io::PValueMode::asymptotic;
    cfg.permutation_replicates = opts.permutations;
    cfg.convention = to_convention(opts.convention);
    cfg.int_transform = opts.int_transform;
    cfg.int_offset = opts.int_offset;
    cfg.flag_threshold = opts.alpha;
    cfg.seed = opts.common.seed;
    cfg.threads = opts.common.threads;

    const jls::io::ScanReport report = jls::io::run_scan(cfg);
    std::cerr << "samples: " << report.samples_used << " shared, " << report.pheno_only
              << " phenotype-only, " << report.geno_only << " genotype-only\n"
              << "variants: " << report.results.size() << " scanned, " << report.degenerate
              << " degenerate, " << report.flagged << " at or below "
              << jls::io::format_p(cfg.flag_threshold) << '\n';
    emit(opts.common, [&](std::ostream& os) { jls::io::write_results(report, os); });
    return 0;
}

// ---------------------------------------------------------------- geneset

struct GenesetOpts {
    CommonOpts common;
    TestOpts tests;
    std::string pheno, geno, sets;
    std::int64_t permutations = 10000;
    std::string convention = "add-one";
    std::string statistic = "fisher-sum";
    bool int_transform = false;
    double int_offset = 0.375;
    std::string per_snp_out;
};

int run_geneset_cmd(const GenesetOpts& opts) {
    const jls::io::PhenotypeTable pheno_table = jls::io::load_phenotypes(opts.pheno);
    const jls::io::GenotypeMatrix matrix = jls::io::load_genotypes(opts.geno, &pheno_table);
    const auto sets = jls::io::load_genesets(opts.sets);
    const jls::io::SampleFrame frame = jls::io::reconcile(pheno_table, matrix);
    if (frame.ids.empty())
        throw jls::io::LoadError("no samples shared between phenotype and genotype files");
    std::cerr << "samples: " << frame.ids.size() << " shared, " << frame.pheno_only
              << " phenotype-only, " << frame.geno_only << " genotype-only\n";

    std::vector<double> y = frame.phenotype;
    if (opts.int_transform)
        y = jls::inverse_normal_transform(y, jls::IntOptions{opts.int_offset});

    // Genotype rows restricted to the reconciled samples.
    std::vector<jls::GenotypeVector> columns(matrix.variants.size());
    auto restricted = [&](std::size_t v) -> const jls::GenotypeVector& {
        jls::GenotypeVector& dst = columns[v];
        if (dst.codes.empty() && !matrix.variants[v].codes.empty()) {
            const auto& src = matrix.variants[v];
            dst.variant_id = src.variant_id;
            dst.chrom = src.chrom;
            dst.codes.reserve(frame.geno_col.size());
            for (const std::uint32_t col : frame.geno_col) dst.codes.push_back(src.codes[col]);
        }
        return dst;
    };

    jls::PhenotypeVector pheno_vec;
    pheno_vec.values = y;

    jls::geneset::Config cfg;
    cfg.tests = to_config(opts.tests);
    cfg.statistic = opts.statistic == "minp-sum" ? jls::geneset::SnpStatistic::minp_log
                                                 : jls::geneset::SnpStatistic::fisher_w;

    std::vector<jls::geneset::Result> results;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto& set = sets[s];
        std::vector<const jls::GenotypeVector*> snps;
        std::vector<std::string> unresolved;
        for (const auto& id : set.variant_ids) {
            const auto it = matrix.by_id.find(id);
            if (it == matrix.by_id.end())
                unresolved.push_back(id);
            else
                snps.push_back(&restricted(it->second));
        }
        for (const auto& id : unresolved)
            std::cerr << "set " << set.set_id << ": variant " << id << " not in genotype file\n";
        if (snps.empty())
            throw jls::io::LoadError("set " + set.set_id + " has no resolvable variants");

        jls::joint::PermutationPlan plan;
        plan.replicates = opts.permutations;
        plan.convention = to_convention(opts.convention);
        plan.seed = jls::rng::mix64(opts.common.seed, static_cast<std::uint64_t>(s));
        plan.threads = opts.common.threads;

        jls::geneset::Result r = jls::geneset::permutation_test(snps, pheno_vec, plan, cfg);
        r.set_id = set.set_id;
        results.push_back(std::move(r));
    }

    emit(opts.common, [&](std::ostream& os) { jls::io::write_geneset_results(results, os); });
    if (!opts.per_snp_out.empty()) {
        jls::io::ScanReport per_snp;
        for (const auto& r : results)
            for (const auto& snp : r.per_snp) per_snp.results.push_back(snp);
        jls::io::write_results(per_snp, resolve_out(opts.per_snp_out));
    }
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    CommonOpts common;
    std::string model = "null";
    std::int64_t n = 2000;
    double maf = 0.3;
    std::string sizes;
    double beta_g = 0.0, beta_e1 = 0.0, beta_e2 = 0.0, beta_ge1 = 0.0, beta_ge2 = 0.0;
    double f1 = 0.3, f2 = 0.3;
    std::int64_t variants = 1;
    std::string prefix = "simulated";
};

int run_simulate_cmd(const SimulateOpts& opts) {
    jls::sim::SimulationSpec spec;
    spec.model = parse_model(opts.model);
    spec.n = opts.n;
    if (!opts.sizes.empty()) {
        spec.sizes = parse_sizes(opts.sizes);
        spec.n = (*spec.sizes)[0] + (*spec.sizes)[1] + (*spec.sizes)[2];
    } else {
        spec.maf = opts.maf;
    }
    spec.beta_g = opts.beta_g;
    spec.beta_e1 = opts.beta_e1;
    spec.beta_e2 = opts.beta_e2;
    spec.beta_ge1 = opts.beta_ge1;
    spec.beta_ge2 = opts.beta_ge2;
    spec.f1 = opts.f1;
    spec.f2 = opts.f2;
    spec.seed = opts.common.seed;
    if (opts.variants < 1) throw CLI::ValidationError("--variants", "must be at least 1");

    // The phenotype follows the model through the first variant; any further
    // variants are independent null draws against the same phenotype.
    const jls::sim::Dataset base = jls::sim::simulate_dataset(spec);

    jls::io::PhenotypeTable pheno;
    char buf[32];
    for (std::int64_t i = 0; i < spec.n; ++i) {
        std::snprintf(buf, sizeof buf, "S%06lld", static_cast<long long>(i + 1));
        pheno.sample_ids.push_back(buf);
    }
    pheno.values = base.y;
    pheno.sex.assign(static_cast<std::size_t>(spec.n), 0);

    jls::io::GenotypeMatrix matrix;
    matrix.sample_ids = pheno.sample_ids;
    for (std::int64_t v = 0; v < opts.variants; ++v) {
        jls::GenotypeVector var;
        std::snprintf(buf, sizeof buf, "rs%06lld", static_cast<long long>(v + 1));
        var.variant_id = buf;
        var.chrom = "1";
        if (v == 0) {
            var.codes = base.geno;
        } else if (spec.maf) {
            var.codes = jls::sim::gen_genotypes_hwe(
                *spec.maf, spec.n, jls::rng::mix64(opts.common.seed, 0x100000ULL + v));
        } else {
            var.codes = jls::sim::gen_genotypes_fixed(
                (*spec.sizes)[0], (*spec.sizes)[1], (*spec.sizes)[2],
                jls::rng::mix64(opts.common.seed, 0x100000ULL + v));
        }
        matrix.variants.push_back(std::move(var));
    }

    const std::string prefix = resolve_out(opts.prefix);
    jls::io::write_phenotypes(pheno, prefix + ".pheno.tsv");
    jls::io::write_genotypes(matrix, prefix + ".geno.tsv");
    std::cerr << "wrote " << prefix << ".pheno.tsv and " << prefix << ".geno.tsv\n";
    return 0;
}

// ---------------------------------------------------------------- grids

struct GridOpts {
    CommonOpts common;
    TestOpts tests;
    std::string model = "null";
    std::int64_t n = 2000;
    std::string maf = "0.3";
    std::vector<std::string> sizes;
    std::string beta_g = "0", beta_e1 = "0", beta_e2 = "0", beta_ge1 = "0", beta_ge2 = "0";
    double f1 = 0.3, f2 = 0.3;
    std::int64_t replicates = 0;
    std::string alpha;
    bool int_transform = false;
    std::int64_t perm_replicates = 0;
    std::string convention = "add-one";
};

void add_grid_opts(CLI::App* cmd, GridOpts& opts) {
    add_common(cmd, opts.common);
    add_test_opts(cmd, opts.tests);
    cmd->add_option("--model", opts.model, "null | i | ii | iii")->capture_default_str();
    cmd->add_option("--n", opts.n, "Sample count")->capture_default_str();
    cmd->add_option("--maf", opts.maf, "MAF list, e.g. 0.3,0.1")->capture_default_str();
    cmd->add_option("--sizes", opts.sizes,
                    "Fixed group sizes n0,n1,n2 (repeatable; overrides --maf)");
    cmd->add_option("--beta-g", opts.beta_g, "Main genetic effect (list or from:to:step)");
    cmd->add_option("--beta-e1", opts.beta_e1, "Exposure 1 main effect");
    cmd->add_option("--beta-e2", opts.beta_e2, "Exposure 2 main effect");
    cmd->add_option("--beta-ge1", opts.beta_ge1, "G x E1 interaction (list or from:to:step)");
    cmd->add_option("--beta-ge2", opts.beta_ge2, "G x E2 interaction (list or from:to:step)");
    cmd->add_option("--f1", opts.f1, "Exposure 1 frequency")->capture_default_str();
    cmd->add_option("--f2", opts.f2, "Exposure 2 frequency")->capture_default_str();
    cmd->add_option("--replicates,-R", opts.replicates, "Monte-Carlo replicates");
    cmd->add_option("--alpha", opts.alpha, "Significance level list");
    cmd->add_flag("--int", opts.int_transform, "Rank inverse-normal transform each replicate");
    cmd->add_option("--perm-K", opts.perm_replicates,
                    "Permutation replicates per dataset (adds permutation-mode rows)");
    cmd->add_option("--convention", opts.convention, "add-one | paper-strict")
        ->check(CLI::IsMember({"add-one", "paper-strict"}))
        ->capture_default_str();
}

jls::sim::ExperimentGrid build_grid(const GridOpts& opts, bool power) {
    jls::sim::ExperimentGrid grid;
    grid.replicates = opts.replicates > 0 ? opts.replicates : (power ? 500 : 20000);
    grid.alphas = parse_double_list(opts.alpha.empty() ? (power ? "5e-8" : "0.05,0.005") : opts.alpha,
                                    "--alpha");
    grid.config = to_config(opts.tests);
    grid.tests.lrt = opts.tests.run_lrt;
    grid.int_transform = opts.int_transform;
    grid.perm_replicates = opts.perm_replicates;
    grid.perm_convention = to_convention(opts.convention);
    grid.seed = opts.common.seed;
    grid.threads = opts.common.threads;

    jls::sim::SimulationSpec base;
    base.model = parse_model(opts.model);
    base.n = opts.n;
    base.f1 = opts.f1;
    base.f2 = opts.f2;

    const auto bg = parse_double_list(opts.beta_g, "--beta-g");
    const auto be1 = parse_double_list(opts.beta_e1, "--beta-e1");
    const auto be2 = parse_double_list(opts.beta_e2, "--beta-e2");
    const auto bge1 = parse_double_list(opts.beta_ge1, "--beta-ge1");
    const auto bge2 = parse_double_list(opts.beta_ge2, "--beta-ge2");

    auto add_cell = [&](const jls::sim::SimulationSpec& spec, const std::string& label) {
        for (double g : bg)
            for (double e1 : be1)
                for (double e2 : be2)
                    for (double ge1 : bge1)
                        for (double ge2 : bge2) {
                            jls::sim::SimulationSpec cell = spec;
                            cell.beta_g = g;
                            cell.beta_e1 = e1;
                            cell.beta_e2 = e2;
                            cell.beta_ge1 = ge1;
                            cell.beta_ge2 = ge2;
                            std::ostringstream tag;
                            tag << label << ",model=" << opts.model << ",n=" << spec.n;
                            if (cell.model != jls::sim::Model::none) {
                                tag << ",bG=" << g << ",bGE1=" << ge1;
                                if (cell.model == jls::sim::Model::i ||
                                    cell.model == jls::sim::Model::ii)
                                    tag << ",bE1=" << e1;
                                if (cell.model == jls::sim::Model::ii)
                                    tag << ",bE2=" << e2 << ",bGE2=" << ge2;
                            }
                            grid.cells.push_back(cell);
                            grid.labels.push_back(tag.str());
                        }
    };

    if (!opts.sizes.empty()) {
        for (const auto& s : opts.sizes) {
            jls::sim::SimulationSpec spec = base;
            const auto sizes = parse_sizes(s);
            spec.sizes = sizes;
            spec.n = sizes[0] + sizes[1] + sizes[2];
            add_cell(spec, "sizes=" + s);
        }
    } else {
        for (double maf : parse_double_list(opts.maf, "--maf")) {
            jls::sim::SimulationSpec spec = base;
            spec.maf = maf;
            std::ostringstream label;
            label << "maf=" << maf;
            add_cell(spec, label.str());
        }
    }
    return grid;
}

int run_grid_cmd(const GridOpts& opts, bool power) {
    const jls::sim::ExperimentGrid grid = build_grid(opts, power);
    const auto rows = power ? jls::sim::run_power_grid(grid) : jls::sim::run_type1_grid(grid);
    emit(opts.common, [&](std::ostream& os) { jls::io::write_rate_table(rows, os); });
    return 0;
}

// ---------------------------------------------------------------- transform

struct TransformOpts {
    CommonOpts common;
    std::string pheno;
    double int_offset = 0.375;
};

int run_transform_cmd(const TransformOpts& opts) {
    jls::io::PhenotypeTable table = jls::io::load_phenotypes(opts.pheno);
    table.values = jls::inverse_normal_transform(table.values, jls::IntOptions{opts.int_offset});
    const std::string path = resolve_out(opts.common.out);
    if (path.empty()) {
        // Table writer only targets files; default to a sibling name.
        jls::io::write_phenotypes(table, opts.pheno + ".int.tsv");
        std::cerr << "wrote " << opts.pheno << ".int.tsv\n";
    } else {
        jls::io::write_phenotypes(table, path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint location-scale association testing toolkit"};
    app.require_subcommand(1);

    ScanOpts scan;
    CLI::App* scan_cmd = app.add_subcommand("scan", "Per-variant joint location-scale scan");
    add_common(scan_cmd, scan.common);
    add_test_opts(scan_cmd, scan.tests);
    scan_cmd->add_option("--pheno", scan.pheno, "Phenotype TSV")->required();
    scan_cmd->add_option("--geno", scan.geno, "Genotype TSV")->required();
    scan_cmd->add_option("--mode", scan.mode, "asymptotic | permutation")
        ->check(CLI::IsMember({"asymptotic", "permutation"}))
        ->capture_default_str();
    scan_cmd->add_option("--permutations,-K", scan.permutations, "Permutation replicates")
        ->capture_default_str();
    scan_cmd->add_option("--convention", scan.convention, "add-one | paper-strict")
        ->check(CLI::IsMember({"add-one", "paper-strict"}))
        ->capture_default_str();
    scan_cmd->add_flag("--int", scan.int_transform, "Inverse-normal transform the phenotype");
    scan_cmd->add_option("--int-offset", scan.int_offset, "Rank offset (0.375 = Blom, 0.5)")
        ->capture_default_str();
    scan_cmd->add_option("--alpha", scan.alpha, "Flagging threshold")->capture_default_str();

    GenesetOpts geneset;
    CLI::App* geneset_cmd = app.add_subcommand("geneset", "Gene-set sum-statistic permutation test");
    add_common(geneset_cmd, geneset.common);
    add_test_opts(geneset_cmd, geneset.tests);
    geneset_cmd->add_option("--pheno", geneset.pheno, "Phenotype TSV")->required();
    geneset_cmd->add_option("--geno", geneset.geno, "Genotype TSV")->required();
    geneset_cmd->add_option("--sets", geneset.sets, "Gene-set file (GMT-style TSV)")->required();
    geneset_cmd->add_option("--permutations,-K", geneset.permutations, "Permutation replicates")
        ->capture_default_str();
    geneset_cmd->add_option("--convention", geneset.convention, "add-one | paper-strict")
        ->check(CLI::IsMember({"add-one", "paper-strict"}))
        ->capture_default_str();
    geneset_cmd->add_option("--stat", geneset.statistic, "fisher-sum | minp-sum")
        ->check(CLI::IsMember({"fisher-sum", "minp-sum"}))
        ->capture_default_str();
    geneset_cmd->add_flag("--int", geneset.int_transform, "Inverse-normal transform the phenotype");
    geneset_cmd->add_option("--int-offset", geneset.int_offset, "Rank offset")
        ->capture_default_str();
    geneset_cmd->add_option("--per-snp-out", geneset.per_snp_out, "Per-SNP results TSV");

    SimulateOpts simulate;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Write a simulated dataset pair");
    add_common(sim_cmd, simulate.common);
    sim_cmd->add_option("--model", simulate.model, "null | i | ii | iii")->capture_default_str();
    sim_cmd->add_option("--n", simulate.n, "Sample count")->capture_default_str();
    sim_cmd->add_option("--maf", simulate.maf, "Minor allele frequency")->capture_default_str();
    sim_cmd->add_option("--sizes", simulate.sizes, "Fixed group sizes n0,n1,n2");
    sim_cmd->add_option("--beta-g", simulate.beta_g, "Main genetic effect")->capture_default_str();
    sim_cmd->add_option("--beta-e1", simulate.beta_e1, "Exposure 1 effect")->capture_default_str();
    sim_cmd->add_option("--beta-e2", simulate.beta_e2, "Exposure 2 effect")->capture_default_str();
    sim_cmd->add_option("--beta-ge1", simulate.beta_ge1, "G x E1 effect")->capture_default_str();
    sim_cmd->add_option("--beta-ge2", simulate.beta_ge2, "G x E2 effect")->capture_default_str();
    sim_cmd->add_option("--f1", simulate.f1, "Exposure 1 frequency")->capture_default_str();
    sim_cmd->add_option("--f2", simulate.f2, "Exposure 2 frequency")->capture_default_str();
    sim_cmd->add_option("--variants", simulate.variants,
                        "Variant count (extra variants are independent null draws)")
        ->capture_default_str();
    sim_cmd->add_option("--prefix", simulate.prefix, "Output path prefix")->capture_default_str();

    GridOpts calibrate;
    CLI::App* cal_cmd = app.add_subcommand("calibrate", "Empirical type-1-error grid");
    add_grid_opts(cal_cmd, calibrate);

    GridOpts power;
    CLI::App* power_cmd = app.add_subcommand("power", "Empirical power grid");
    add_grid_opts(power_cmd, power);

    TransformOpts transform;
    CLI::App* tr_cmd = app.add_subcommand("transform", "Rank inverse-normal transform a phenotype");
    add_common(tr_cmd, transform.common);
    tr_cmd->add_option("--pheno", transform.pheno, "Phenotype TSV")->required();
    tr_cmd->add_option("--int-offset", transform.int_offset, "Rank offset (0.375 = Blom, 0.5)")
        ->capture_default_str();

    try {
        std::vector<std::string> args = merge_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (scan_cmd->parsed()) return run_scan_cmd(scan);
        if (geneset_cmd->parsed()) return run_geneset_cmd(geneset);
        if (sim_cmd->parsed()) return run_simulate_cmd(simulate);
        if (cal_cmd->parsed()) return run_grid_cmd(calibrate, false);
        if (power_cmd->parsed()) return run_grid_cmd(power, true);
        if (tr_cmd->parsed()) return run_transform_cmd(transform);
    } catch (const jls::io::LoadError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
