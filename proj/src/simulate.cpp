#include "jls/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jls/parallel.hpp"
#include "jls/rng.hpp"
#include "jls/transform.hpp"

namespace jls::sim {

void validate(const SimulationSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("simulation: n must be positive");
    if (spec.maf.has_value() == spec.sizes.has_value())
        throw std::invalid_argument("simulation: set exactly one of maf / group sizes");
    if (spec.maf && !(*spec.maf > 0.0 && *spec.maf <= 0.5))
        throw std::invalid_argument("simulation: maf must lie in (0, 0.5]");
    if (spec.sizes) {
        const auto& s = *spec.sizes;
        if (s[0] < 0 || s[1] < 0 || s[2] < 0 || s[0] + s[1] + s[2] != spec.n)
            throw std::invalid_argument("simulation: group sizes must be non-negative and sum to n");
    }
    if (!(spec.f1 > 0.0 && spec.f1 <= 1.0) || !(spec.f2 > 0.0 && spec.f2 <= 1.0))
        throw std::invalid_argument("simulation: exposure frequencies must lie in (0, 1]");
    for (double b : {spec.beta_g, spec.beta_e1, spec.beta_e2, spec.beta_ge1, spec.beta_ge2})
        if (!std::isfinite(b)) throw std::invalid_argument("simulation: effects must be finite");
}

namespace {

// Fixed substream labels so genotype draws do not depend on the model.
enum : std::uint64_t { kGenoStream = 1, kE1Stream = 2, kE2Stream = 3, kNoiseStream = 4 };

}  // namespace

std::vector<std::int8_t> gen_genotypes_hwe(double maf, std::int64_t n, std::uint64_t seed) {
    if (!(maf > 0.0 && maf <= 0.5))
        throw std::invalid_argument("gen_genotypes_hwe: maf must lie in (0, 0.5]");
    const double p0 = (1.0 - maf) * (1.0 - maf);
    const double p01 = p0 + 2.0 * maf * (1.0 - maf);
    rng::Xoshiro256pp gen(rng::mix64(seed, kGenoStream));
    std::vector<std::int8_t> out(static_cast<std::size_t>(n));
    for (auto& g : out) {
        const double u = rng::uniform01(gen);
        g = u < p0 ? 0 : (u < p01 ? 1 : 2);
    }
    return out;
}

std::vector<std::int8_t> gen_genotypes_fixed(std::int64_t n0, std::int64_t n1,
                                             std::int64_t n2, std::uint64_t seed) {
    if (n0 < 0 || n1 < 0 || n2 < 0)
        throw std::invalid_argument("gen_genotypes_fixed: negative group size");
    std::vector<std::int8_t> out;
    out.reserve(static_cast<std::size_t>(n0 + n1 + n2));
    out.insert(out.end(), static_cast<std::size_t>(n0), std::int8_t{0});
    out.insert(out.end(), static_cast<std::size_t>(n1), std::int8_t{1});
    out.insert(out.end(), static_cast<std::size_t>(n2), std::int8_t{2});
    rng::Xoshiro256pp gen(rng::mix64(seed, kGenoStream));
    rng::shuffle(std::span<std::int8_t>(out), gen);
    return out;
}

Dataset simulate_dataset(const SimulationSpec& spec) {
    validate(spec);
    Dataset d;
    d.geno = spec.maf ? gen_genotypes_hwe(*spec.maf, spec.n, spec.seed)
                      : gen_genotypes_fixed((*spec.sizes)[0], (*spec.sizes)[1],
                                            (*spec.sizes)[2], spec.seed);

    const std::size_t n = static_cast<std::size_t>(spec.n);
    const bool need_e1 = spec.model == Model::i || spec.model == Model::ii ||
                         spec.model == Model::iii;
    const bool need_e2 = spec.model == Model::ii;

    if (need_e1) {
        rng::Xoshiro256pp gen(rng::mix64(spec.seed, kE1Stream));
        d.e1.resize(n);
        for (auto& e : d.e1) e = rng::uniform01(gen) < spec.f1 ? 1 : 0;
    }
    if (need_e2) {
        rng::Xoshiro256pp gen(rng::mix64(spec.seed, kE2Stream));
        d.e2.resize(n);
        for (auto& e : d.e2) e = rng::uniform01(gen) < spec.f2 ? 1 : 0;
    }

    d.y.resize(n);
    rng::Xoshiro256pp noise(rng::mix64(spec.seed, kNoiseStream));
    rng::fill_normal(d.y, noise);

    switch (spec.model) {
        case Model::none:
            break;
        case Model::i:
            for (std::size_t i = 0; i < n; ++i)
                d.y[i] += spec.beta_g * d.geno[i] + spec.beta_e1 * d.e1[i] +
                          spec.beta_ge1 * d.geno[i] * d.e1[i];
            break;
        case Model::ii:
            for (std::size_t i = 0; i < n; ++i)
                d.y[i] += spec.beta_e1 * d.e1[i] + spec.beta_e2 * d.e2[i] +
                          spec.beta_ge1 * d.geno[i] * d.e1[i] +
                          spec.beta_ge2 * d.geno[i] * d.e2[i];
            break;
        case Model::iii:
            for (std::size_t i = 0; i < n; ++i)
                d.y[i] += spec.beta_ge1 * d.geno[i] * d.e1[i];
            break;
    }
    return d;
}

double RateRow::se() const {
    if (evaluated <= 0) return std::numeric_limits<double>::quiet_NaN();
    const double r = rate();
    return std::sqrt(r * (1.0 - r) / static_cast<double>(evaluated));
}

namespace {

enum TestIndex { kReg = 0, kLevene, kFisher, kMinp, kLrt, kTestCount };

const char* kTestNames[kTestCount] = {"reg", "levene", "fisher", "minp", "lrt"};

struct ReplicateP {
    std::array<double, kTestCount> asymptotic;
    std::array<double, kTestCount> permutation;
};

// All five statistics of one dataset; p-values are NaN when degenerate.
struct Scores {
    std::array<double, kTestCount> p;
    std::array<double, kTestCount> stat;
    std::array<bool, kTestCount> valid;
};

Scores score_dataset(std::span<const std::int8_t> geno, std::span<const double> y,
                     const joint::TestConfig& config) {
    Scores s;
    s.p.fill(std::numeric_limits<double>::quiet_NaN());
    s.stat.fill(std::numeric_limits<double>::quiet_NaN());
    s.valid.fill(false);

    const joint::JlsResult r = joint::jls_single_variant(geno, y, config);
    if (r.location.ok()) {
        s.p[kReg] = r.location.p;
        s.stat[kReg] = std::fabs(r.location.statistic);
        s.valid[kReg] = true;
    }
    if (r.scale.ok()) {
        s.p[kLevene] = r.scale.p;
        s.stat[kLevene] = r.scale.statistic;
        s.valid[kLevene] = true;
    }
    if (r.fisher.valid) {
        s.p[kFisher] = r.fisher.p;
        s.stat[kFisher] = r.fisher.statistic;
        s.valid[kFisher] = true;
        s.p[kMinp] = r.minp.p;
        s.stat[kMinp] = -r.minp.statistic;  // oriented so larger is more extreme
        s.valid[kMinp] = true;
    }
    if (config.run_lrt && r.lrt.ok()) {
        s.p[kLrt] = r.lrt.p;
        s.stat[kLrt] = r.lrt.statistic;
        s.valid[kLrt] = true;
    }
    return s;
}

ReplicateP run_replicate(const SimulationSpec& cell_spec, std::uint64_t dataset_seed,
                         const ExperimentGrid& grid) {
    SimulationSpec spec = cell_spec;
    spec.seed = dataset_seed;
    const Dataset data = simulate_dataset(spec);

    std::vector<double> y = grid.int_transform
                                ? inverse_normal_transform(data.y)
                                : data.y;

    joint::TestConfig config = grid.config;
    config.run_lrt = grid.tests.lrt;

    ReplicateP rep;
    const Scores obs = score_dataset(data.geno, y, config);
    rep.asymptotic = obs.p;
    rep.permutation.fill(std::numeric_limits<double>::quiet_NaN());

    if (grid.perm_replicates > 0) {
        std::array<std::int64_t, kTestCount> hits{};
        std::array<std::int64_t, kTestCount> used{};
        std::vector<double> perm(y);
        for (std::int64_t k = 0; k < grid.perm_replicates; ++k) {
            std::copy(y.begin(), y.end(), perm.begin());
            rng::Xoshiro256pp gen(rng::mix64(dataset_seed, 0x70657263ULL + static_cast<std::uint64_t>(k)));
            rng::shuffle(std::span<double>(perm), gen);
            const Scores ps = score_dataset(data.geno, perm, config);
            for (int t = 0; t < kTestCount; ++t) {
                if (!obs.valid[t] || !ps.valid[t]) continue;
                ++used[t];
                if (grid.perm_convention == joint::PermConvention::add_one)
                    hits[t] += ps.stat[t] >= obs.stat[t];
                else
                    hits[t] += ps.stat[t] > obs.stat[t];
            }
        }
        for (int t = 0; t < kTestCount; ++t) {
            if (!obs.valid[t] || used[t] == 0) continue;
            rep.permutation[t] =
                grid.perm_convention == joint::PermConvention::add_one
                    ? static_cast<double>(hits[t] + 1) / static_cast<double>(used[t] + 1)
                    : static_cast<double>(hits[t]) / static_cast<double>(used[t]);
        }
    }
    return rep;
}

bool test_enabled(const TestSelection& sel, int t) {
    switch (t) {
        case kReg: return sel.reg;
        case kLevene: return sel.levene;
        case kFisher: return sel.fisher;
        case kMinp: return sel.minp;
        case kLrt: return sel.lrt;
    }
    return false;
}

std::vector<RateRow> run_grid(const ExperimentGrid& grid) {
    if (grid.replicates < 1)
        throw std::invalid_argument("experiment grid: need at least one replicate");
    for (double a : grid.alphas)
        if (!(a > 0.0 && a <= 1.0))
            throw std::invalid_argument("experiment grid: alpha must lie in (0, 1]");
    for (const auto& cell : grid.cells) validate(cell);

    std::vector<RateRow> rows;
    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
        const std::uint64_t cell_seed = rng::mix64(grid.seed, static_cast<std::uint64_t>(c));

        std::vector<ReplicateP> reps(static_cast<std::size_t>(grid.replicates));
        par::parallel_chunks(grid.replicates, grid.threads,
                             [&](std::int64_t begin, std::int64_t end, int) {
                                 for (std::int64_t r = begin; r < end; ++r)
                                     reps[static_cast<std::size_t>(r)] = run_replicate(
                                         grid.cells[c],
                                         rng::mix64(cell_seed, static_cast<std::uint64_t>(r)),
                                         grid);
                             });

        const std::string label = c < grid.labels.size()
                                      ? grid.labels[c]
                                      : "cell" + std::to_string(c);
        const int n_modes = grid.perm_replicates > 0 ? 2 : 1;
        for (int mode = 0; mode < n_modes; ++mode) {
            for (int t = 0; t < kTestCount; ++t) {
                if (!test_enabled(grid.tests, t)) continue;
                for (double alpha : grid.alphas) {
                    RateRow row;
                    row.cell = label;
                    row.test = kTestNames[t];
                    row.mode = mode == 0 ? "asymptotic" : "permutation";
                    row.alpha = alpha;
                    for (const auto& rep : reps) {
                        const double p = mode == 0 ? rep.asymptotic[t] : rep.permutation[t];
                        if (std::isfinite(p)) {
                            ++row.evaluated;
                            row.rejections += p <= alpha;
                        } else {
                            ++row.degenerate;
                        }
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

}  // namespace

std::vector<RateRow> run_type1_grid(const ExperimentGrid& grid) { return run_grid(grid); }

std::vector<RateRow> run_power_grid(const ExperimentGrid& grid) { return run_grid(grid); }

}  // namespace jls::sim
