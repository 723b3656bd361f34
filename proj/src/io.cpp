#include "jls/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "jls/parallel.hpp"
#include "jls/rng.hpp"
#include "jls/transform.hpp"

namespace jls::io {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Strips a trailing carriage return so CRLF files load too.
void chomp(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& msg) {
    throw LoadError(path + ":" + std::to_string(line_no) + ": " + msg);
}

double parse_value(const std::string& field, const std::string& path, std::size_t line_no) {
    if (field == "NA") return nan_value();
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        fail(path, line_no, "unparseable phenotype value '" + field + "'");
    return v;
}

std::ifstream open_or_fail(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(path + ": cannot open for reading");
    return in;
}

bool is_x_chrom(const std::string& chrom) {
    std::string c = chrom;
    if (c.rfind("chr", 0) == 0 || c.rfind("CHR", 0) == 0 || c.rfind("Chr", 0) == 0)
        c = c.substr(3);
    return c == "X" || c == "x" || c == "23";
}

}  // namespace

PhenotypeTable load_phenotypes(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) fail(path, 1, "empty file");
    chomp(line);
    ++line_no;
    const auto header = split_tabs(line);
    if (header.size() < 2 || header[0] != "sample_id" || header[1] != "phenotype")
        fail(path, line_no, "expected header 'sample_id<TAB>phenotype[<TAB>sex]'");
    const bool has_sex = header.size() >= 3 && header[2] == "sex";
    if (header.size() > (has_sex ? 3u : 2u))
        fail(path, line_no, "unexpected extra header columns");

    PhenotypeTable table;
    table.has_sex = has_sex;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        chomp(line);
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != header.size())
            fail(path, line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                    std::to_string(fields.size()));
        if (fields[0].empty()) fail(path, line_no, "empty sample id");
        if (!seen.insert(fields[0]).second)
            fail(path, line_no, "duplicate sample id '" + fields[0] + "'");
        table.sample_ids.push_back(fields[0]);
        table.values.push_back(parse_value(fields[1], path, line_no));
        std::int8_t sex = 0;
        if (has_sex) {
            if (fields[2] == "1")
                sex = 1;
            else if (fields[2] == "2")
                sex = 2;
            else if (fields[2] != "NA" && !fields[2].empty())
                fail(path, line_no, "sex must be 1, 2 or NA, got '" + fields[2] + "'");
        }
        table.sex.push_back(sex);
    }
    return table;
}

GenotypeMatrix load_genotypes(const std::string& path, const PhenotypeTable* sex_source) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) fail(path, 1, "empty file");
    chomp(line);
    ++line_no;
    const auto header = split_tabs(line);
    if (header.size() < 3 || header[0] != "variant_id" || header[1] != "chrom")
        fail(path, line_no, "expected header 'variant_id<TAB>chrom<TAB>sample ids...'");

    GenotypeMatrix matrix;
    matrix.sample_ids.assign(header.begin() + 2, header.end());
    const std::size_t n = matrix.sample_ids.size();
    {
        std::unordered_set<std::string> seen;
        for (const auto& id : matrix.sample_ids)
            if (id.empty() || !seen.insert(id).second)
                fail(path, line_no, "empty or duplicate sample id in header");
    }

    // Sex lookup for X-chromosome validation.
    std::vector<std::int8_t> col_sex(n, 0);
    if (sex_source && sex_source->has_sex) {
        std::unordered_map<std::string, std::int8_t> sex_of;
        for (std::size_t i = 0; i < sex_source->sample_ids.size(); ++i)
            sex_of.emplace(sex_source->sample_ids[i], sex_source->sex[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const auto it = sex_of.find(matrix.sample_ids[j]);
            if (it != sex_of.end()) col_sex[j] = it->second;
        }
    }

    while (std::getline(in, line)) {
        chomp(line);
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != n + 2)
            fail(path, line_no, "variant row has " + std::to_string(fields.size() - 2) +
                                    " genotype columns, header lists " + std::to_string(n));
        GenotypeVector v;
        v.variant_id = fields[0];
        v.chrom = fields[1];
        if (v.variant_id.empty()) fail(path, line_no, "empty variant id");
        if (matrix.by_id.count(v.variant_id))
            fail(path, line_no, "duplicate variant id '" + v.variant_id + "'");
        const bool x_chrom = is_x_chrom(v.chrom);
        v.codes.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::string& f = fields[j + 2];
            std::int8_t code;
            if (f == "NA")
                code = kMissing;
            else if (f == "0")
                code = 0;
            else if (f == "1")
                code = 1;
            else if (f == "2")
                code = 2;
            else
                fail(path, line_no, "genotype code must be 0, 1, 2 or NA, got '" + f +
                                        "' for sample " + matrix.sample_ids[j]);
            if (x_chrom && code == 1 && col_sex[j] == 1)
                fail(path, line_no, "male sample " + matrix.sample_ids[j] +
                                        " is heterozygous for X-chromosome variant " +
                                        v.variant_id);
            v.codes[j] = code;
        }
        matrix.by_id.emplace(v.variant_id, matrix.variants.size());
        matrix.variants.push_back(std::move(v));
    }
    return matrix;
}

std::vector<geneset::GeneSet> load_genesets(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<geneset::GeneSet> sets;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        chomp(line);
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() < 3)
            fail(path, line_no, "gene-set row needs set_id, description and at least one variant");
        geneset::GeneSet set;
        set.set_id = fields[0];
        set.description = fields[1];
        if (set.set_id.empty()) fail(path, line_no, "empty set id");
        if (!seen.insert(set.set_id).second)
            fail(path, line_no, "duplicate set id '" + set.set_id + "'");
        std::unordered_set<std::string> ids;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;
            if (!ids.insert(fields[i]).second)
                fail(path, line_no, "duplicate variant id '" + fields[i] + "' in set " + set.set_id);
            set.variant_ids.push_back(fields[i]);
        }
        if (set.variant_ids.empty()) fail(path, line_no, "set " + set.set_id + " has no variants");
        sets.push_back(std::move(set));
    }
    return sets;
}

SampleFrame reconcile(const PhenotypeTable& pheno, const GenotypeMatrix& geno) {
    std::unordered_map<std::string, std::size_t> pheno_row;
    for (std::size_t i = 0; i < pheno.sample_ids.size(); ++i)
        pheno_row.emplace(pheno.sample_ids[i], i);

    SampleFrame frame;
    for (std::size_t j = 0; j < geno.sample_ids.size(); ++j) {
        const auto it = pheno_row.find(geno.sample_ids[j]);
        if (it == pheno_row.end()) {
            ++frame.geno_only;
            continue;
        }
        frame.ids.push_back(geno.sample_ids[j]);
        frame.phenotype.push_back(pheno.values[it->second]);
        frame.geno_col.push_back(static_cast<std::uint32_t>(j));
    }
    frame.pheno_only = static_cast<std::int64_t>(pheno.sample_ids.size()) -
                       static_cast<std::int64_t>(frame.ids.size());
    return frame;
}

ScanReport run_scan(const ScanConfig& config) {
    const PhenotypeTable pheno = load_phenotypes(config.pheno_path);
    const GenotypeMatrix matrix = load_genotypes(config.geno_path, &pheno);
    const SampleFrame frame = reconcile(pheno, matrix);
    if (frame.ids.empty())
        throw LoadError("no samples shared between phenotype and genotype files");

    std::vector<double> y = frame.phenotype;
    if (config.int_transform) {
        try {
            y = inverse_normal_transform(y, IntOptions{config.int_offset});
        } catch (const std::invalid_argument& e) {
            throw LoadError(config.pheno_path + ": " + e.what());
        }
    }

    ScanReport report;
    report.samples_used = static_cast<std::int64_t>(frame.ids.size());
    report.pheno_only = frame.pheno_only;
    report.geno_only = frame.geno_only;

    const std::size_t n_variants = matrix.variants.size();
    report.results.resize(n_variants);
    const bool permute = config.mode == PValueMode::permutation;
    if (permute) {
        report.perm_fisher.assign(n_variants, nan_value());
        report.perm_minp.assign(n_variants, nan_value());
        report.perm_lrt.assign(n_variants, nan_value());
    }

    par::parallel_chunks(
        static_cast<std::int64_t>(n_variants), config.threads,
        [&](std::int64_t begin, std::int64_t end, int) {
            std::vector<std::int8_t> codes;
            std::vector<double> yy;
            for (std::int64_t v = begin; v < end; ++v) {
                const GenotypeVector& var = matrix.variants[static_cast<std::size_t>(v)];
                codes.clear();
                yy.clear();
                for (std::size_t s = 0; s < frame.geno_col.size(); ++s) {
                    const std::int8_t code = var.codes[frame.geno_col[s]];
                    if (code == kMissing || !std::isfinite(y[s])) continue;
                    codes.push_back(code);
                    yy.push_back(y[s]);
                }
                joint::JlsResult r = joint::jls_single_variant(codes, yy, config.tests);
                r.variant_id = var.variant_id;
                r.chrom = var.chrom;
                if (permute) {
                    joint::PermutationPlan plan;
                    plan.replicates = config.permutation_replicates;
                    plan.convention = config.convention;
                    plan.seed = rng::mix64(config.seed, static_cast<std::uint64_t>(v));
                    plan.threads = 1;  // parallelism lives at the variant level here
                    const joint::PermutationResult pr =
                        joint::permute_and_rescore(codes, yy, plan, config.tests);
                    report.perm_fisher[static_cast<std::size_t>(v)] = pr.p_fisher;
                    report.perm_minp[static_cast<std::size_t>(v)] = pr.p_minp;
                    report.perm_lrt[static_cast<std::size_t>(v)] = pr.p_lrt;
                }
                report.results[static_cast<std::size_t>(v)] = std::move(r);
            }
        });

    for (std::size_t v = 0; v < n_variants; ++v) {
        const auto& r = report.results[v];
        if (r.degenerate()) ++report.degenerate;
        const double joint_p = permute ? report.perm_fisher[v] : r.fisher.p;
        if (std::isfinite(joint_p) && joint_p <= config.flag_threshold) ++report.flagged;
    }
    return report;
}

std::string format_p(double p) {
    if (!std::isfinite(p)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", p);
    std::string s(buf);
    // Compact exponent: 1.382300e-01 -> 1.382300e-1, keeping the sign.
    const std::size_t e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mantissa = s.substr(0, e + 1);
    std::string exp = s.substr(e + 1);
    std::string sign;
    if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
        sign = exp.substr(0, 1);
        exp = exp.substr(1);
    }
    std::size_t first = exp.find_first_not_of('0');
    exp = first == std::string::npos ? "0" : exp.substr(first);
    return mantissa + sign + exp;
}

std::string format_stat(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

const char* status_of(const joint::JlsResult& r) {
    if (r.degenerate()) return "degenerate";
    if (r.fisher.clamped) return "clamped";
    return "ok";
}

void write_results_stream(const ScanReport& report, std::ostream& os) {
    os << "variant_id\tchrom\tn_used\tp_loc\tp_scale\tw_fisher\tp_fisher\tw_minp\tp_minp\tp_lrt\tstatus\n";
    const bool permute = !report.perm_fisher.empty();
    for (std::size_t v = 0; v < report.results.size(); ++v) {
        const auto& r = report.results[v];
        const double p_fisher = permute ? report.perm_fisher[v] : r.fisher.p;
        const double p_minp = permute ? report.perm_minp[v] : r.minp.p;
        const double p_lrt = permute && std::isfinite(report.perm_lrt[v]) ? report.perm_lrt[v]
                                                                          : r.lrt.p;
        os << r.variant_id << '\t' << r.chrom << '\t' << r.n_used << '\t'
           << format_p(r.location.p) << '\t' << format_p(r.scale.p) << '\t'
           << format_stat(r.fisher.statistic) << '\t' << format_p(p_fisher) << '\t'
           << format_p(r.minp.statistic) << '\t' << format_p(p_minp) << '\t'
           << format_p(p_lrt) << '\t' << status_of(r) << '\n';
    }
}

}  // namespace

void write_results(const ScanReport& report, std::ostream& os) {
    write_results_stream(report, os);
}

void write_results(const ScanReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_results_stream(report, out);
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) fail(path, 1, "empty results file");
    ++line_no;
    std::vector<ResultRow> rows;
    auto field_value = [&](const std::string& f) {
        return f == "NA" ? nan_value() : std::stod(f);
    };
    while (std::getline(in, line)) {
        chomp(line);
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 11) fail(path, line_no, "expected 11 columns");
        ResultRow row;
        row.variant_id = f[0];
        row.chrom = f[1];
        row.n_used = std::stoll(f[2]);
        row.p_loc = field_value(f[3]);
        row.p_scale = field_value(f[4]);
        row.w_fisher = field_value(f[5]);
        row.p_fisher = field_value(f[6]);
        row.w_minp = field_value(f[7]);
        row.p_minp = field_value(f[8]);
        row.p_lrt = field_value(f[9]);
        row.status = f[10];
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void write_rate_stream(const std::vector<sim::RateRow>& rows, std::ostream& os) {
    os << "cell\ttest\tmode\talpha\trate\tse\trejections\tevaluated\tdegenerate\n";
    for (const auto& r : rows) {
        os << r.cell << '\t' << r.test << '\t' << r.mode << '\t' << format_p(r.alpha) << '\t'
           << format_p(r.rate()) << '\t' << format_p(r.se()) << '\t' << r.rejections << '\t'
           << r.evaluated << '\t' << r.degenerate << '\n';
    }
}

}  // namespace

void write_rate_table(const std::vector<sim::RateRow>& rows, std::ostream& os) {
    write_rate_stream(rows, os);
}

void write_rate_table(const std::vector<sim::RateRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_rate_stream(rows, out);
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

void write_geneset_stream(const std::vector<geneset::Result>& results, std::ostream& os) {
    os << "set_id\tj_total\tj_used\tobserved_sum\tK\tK_used\tempirical_p\thigh_degeneracy\n";
    for (const auto& r : results) {
        os << r.set_id << '\t' << r.j_total << '\t' << r.j_used << '\t'
           << format_stat(r.observed_sum) << '\t' << r.replicates << '\t' << r.replicates_used
           << '\t' << format_p(r.empirical_p) << '\t' << (r.high_degeneracy ? 1 : 0) << '\n';
    }
}

}  // namespace

void write_geneset_results(const std::vector<geneset::Result>& results, std::ostream& os) {
    write_geneset_stream(results, os);
}

void write_geneset_results(const std::vector<geneset::Result>& results, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_geneset_stream(results, out);
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

void write_phenotypes(const PhenotypeTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "sample_id\tphenotype";
    if (table.has_sex) out << "\tsex";
    out << '\n';
    for (std::size_t i = 0; i < table.sample_ids.size(); ++i) {
        out << table.sample_ids[i] << '\t';
        if (std::isfinite(table.values[i]))
            out << format_stat(table.values[i]);
        else
            out << "NA";
        if (table.has_sex) {
            if (table.sex[i] == 0)
                out << "\tNA";
            else
                out << '\t' << static_cast<int>(table.sex[i]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

void write_genotypes(const GenotypeMatrix& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "variant_id\tchrom";
    for (const auto& id : matrix.sample_ids) out << '\t' << id;
    out << '\n';
    for (const auto& v : matrix.variants) {
        out << v.variant_id << '\t' << v.chrom;
        for (const std::int8_t code : v.codes) {
            if (code == kMissing)
                out << "\tNA";
            else
                out << '\t' << static_cast<int>(code);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace jls::io
