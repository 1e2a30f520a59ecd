#ifndef GMI_TESTS_PROPERTIES_HPP
#define GMI_TESTS_PROPERTIES_HPP

// Randomized property checks shared by the unit suite and the acceptance
// runner. Each check returns a description of the first counterexample, or
// nullopt when every trial passed. Seeds are fixed so failures reproduce.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gmi/gmi.hpp"
#include "oracle.hpp"

namespace gmi::testing {

using Rng = std::mt19937_64;

struct PropertyResult {
    std::string name;
    int trials = 0;
    std::optional<std::string> failure;
};

inline bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline std::string number_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Mix of small integers (ties, degenerate ranges) and continuous values.
inline double draw_value(Rng& rng) {
    if (coin(rng, 0.4)) return uniform_int(rng, 0, 4);
    return uniform_real(rng, -100.0, 100.0);
}

inline std::vector<std::optional<double>> draw_column(Rng& rng, int size, double missing_p) {
    std::vector<std::optional<double>> xs(size);
    for (auto& x : xs)
        if (!coin(rng, missing_p)) x = draw_value(rng);
    return xs;
}

struct RandomCase {
    OracleInstance oracle;
    Schema schema;
    RubricTemplate tmpl;
    std::vector<ProgramDataset> datasets;
};

inline std::string criterion_id(int category, int k) {
    return "c-" + text::lower(code(kAllCategories[category])) + "-" + std::to_string(k);
}

// Random pipeline instance: up to 5 programs, up to 4 indicators per
// category, random missing mask, random rubric answers. Datasets are built by
// writing and re-reading observation files so parsing is exercised too.
inline RandomCase draw_case(Rng& rng) {
    RandomCase rc;
    const int n = uniform_int(rng, 1, 5);
    rc.oracle.programs = n;
    rc.oracle.rubric.assign(n, {});

    std::vector<IndicatorDef> defs;
    std::vector<Criterion> criteria;
    std::vector<std::vector<std::string>> rows(n);
    for (int c = 0; c < 6; ++c) {
        const auto cat = kAllCategories[c];
        defs.push_back({rollup_id(cat), cat, IndicatorKind::Synthetic, DataType::Numeric, "none",
                        Direction::NonScorable, "roll-up"});
        const int used = uniform_int(rng, 0, 4);
        const double missing_p = uniform_real(rng, 0.0, 0.6);
        for (int j = 1; j <= 4; ++j) {
            const bool lower = coin(rng, 0.3);
            const std::string id = rollup_id(cat) + "-" + std::to_string(j);
            defs.push_back({id, cat, IndicatorKind::Quantitative, DataType::Numeric, "none",
                            lower ? Direction::LowerBetter : Direction::HigherBetter, "indicator " + id});
            if (j > used) continue;
            OracleIndicator ind;
            ind.category = c;
            ind.lower_better = lower;
            ind.values = draw_column(rng, n, missing_p);
            for (int p = 0; p < n; ++p) {
                if (ind.values[p]) {
                    rows[p].push_back(id + "|" + number_text(*ind.values[p]));
                    continue;
                }
                switch (uniform_int(rng, 0, 3)) {
                case 0: break; // row omitted entirely
                case 1: rows[p].push_back(id + "|n.a."); break;
                case 2: rows[p].push_back(id + "|tbc"); break;
                default: rows[p].push_back(id + "|"); break;
                }
            }
            rc.oracle.indicators.push_back(std::move(ind));
        }
        for (int k = 1; k <= 2; ++k) criteria.push_back({criterion_id(c, k), cat, "prompt"});
    }
    rc.schema = Schema("random", std::move(defs));
    rc.tmpl = RubricTemplate(criteria);

    for (int p = 0; p < n; ++p) {
        std::ostringstream file;
        file << "program|P" << p << "\nindicator_id|raw_value|unit\n";
        std::shuffle(rows[p].begin(), rows[p].end(), rng);
        for (const auto& r : rows[p]) file << r << '\n';
        file << "[rubric]\ncriterion_id|score\n";
        for (int c = 0; c < 6; ++c) {
            for (int k = 1; k <= 2; ++k) {
                if (!coin(rng, 0.3)) continue;
                const int score = uniform_int(rng, 1, 5);
                rc.oracle.rubric[p][c].push_back(score);
                file << criterion_id(c, k) << '|' << score << '\n';
            }
        }
        std::istringstream in(file.str());
        rc.datasets.push_back(load_program_dataset(in, rc.schema, rc.tmpl));
    }
    return rc;
}

inline GmiOptions partial_options() {
    GmiOptions opts;
    opts.allow_partial = true;
    return opts;
}

inline PropertyResult check_oracle_equivalence(int trials, std::uint64_t seed = 1) {
    PropertyResult r{"oracle equivalence", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto rc = draw_case(rng);
        const auto expected = oracle_run(rc.oracle);
        std::vector<GmiResult> got;
        try {
            got = score_datasets(rc.datasets, rc.schema, rc.tmpl, {}, partial_options()).results;
        } catch (const PartialDataError&) {
            if (!expected.error) r.failure = "trial " + std::to_string(t) + ": unexpected PartialDataError";
            continue;
        }
        if (expected.error) {
            r.failure = "trial " + std::to_string(t) + ": oracle expected PartialDataError";
            break;
        }
        for (int p = 0; p < rc.oracle.programs; ++p) {
            if (!near(got[p].gmi, expected.gmi[p], 1e-9))
                r.failure = "trial " + std::to_string(t) + " program " + std::to_string(p) + ": gmi " +
                            number_text(got[p].gmi) + " vs oracle " + number_text(expected.gmi[p]);
            for (int c = 0; c < 6; ++c) {
                const auto& a = got[p].category_scores[c];
                const auto& b = expected.category[p][c];
                if (a.has_value() != b.has_value() || (a && !near(*a, *b, 1e-9)))
                    r.failure = "trial " + std::to_string(t) + ": category score mismatch";
            }
        }
    }
    return r;
}

inline PropertyResult check_range(int trials, std::uint64_t seed = 2) {
    PropertyResult r{"range", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto xs = draw_column(rng, uniform_int(rng, 1, 8), 0.3);
        for (const auto& s : minmax_normalize(xs).scores)
            if (s && !(*s >= 0.0 && *s <= 1.0)) r.failure = "normalized score " + number_text(*s) + " outside [0,1]";
        const auto rc = draw_case(rng);
        try {
            for (const auto& g : score_datasets(rc.datasets, rc.schema, rc.tmpl, {}, partial_options()).results) {
                if (!(g.gmi >= 0.0 && g.gmi <= kMaxGmi + 1e-12)) r.failure = "GMI " + number_text(g.gmi) + " outside [0,6]";
                for (const auto& s : g.normalized_category_scores)
                    if (s && !(*s >= 0.0 && *s <= 1.0)) r.failure = "category score outside [0,1]";
            }
        } catch (const PartialDataError&) {
        }
    }
    return r;
}

inline PropertyResult check_anchors(int trials, std::uint64_t seed = 3) {
    PropertyResult r{"anchors", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto xs = draw_column(rng, uniform_int(rng, 2, 8), 0.2);
        const auto norm = minmax_normalize(xs);
        if (norm.degenerate || !norm.min) continue;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] && *xs[i] == *norm.min && norm.scores[i] != 0.0) r.failure = "minimum did not map to 0";
            if (xs[i] && *xs[i] == *norm.max && norm.scores[i] != 1.0) r.failure = "maximum did not map to 1";
        }
    }
    return r;
}

inline PropertyResult check_monotonicity(int trials, std::uint64_t seed = 4) {
    PropertyResult r{"monotonicity", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto xs = draw_column(rng, uniform_int(rng, 1, 8), 0.2);
        const auto s = minmax_normalize(xs).scores;
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j)
                if (xs[i] && xs[j] && *xs[i] < *xs[j] && !(*s[i] <= *s[j])) r.failure = "order not preserved";
    }
    return r;
}

inline PropertyResult check_affine_invariance(int trials, std::uint64_t seed = 5) {
    PropertyResult r{"affine invariance", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto xs = draw_column(rng, uniform_int(rng, 1, 8), 0.2);
        const double a = uniform_real(rng, 0.1, 10.0);
        const double b = uniform_real(rng, -100.0, 100.0);
        auto ys = xs;
        for (auto& y : ys)
            if (y) y = a * *y + b;
        const auto sx = minmax_normalize(xs).scores;
        const auto sy = minmax_normalize(ys).scores;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (sx[i].has_value() != sy[i].has_value() || (sx[i] && !near(*sx[i], *sy[i], 1e-9)))
                r.failure = "a=" + number_text(a) + " b=" + number_text(b) + " changed a normalized score";
    }
    return r;
}

inline PropertyResult check_permutation_invariance(int trials, std::uint64_t seed = 6) {
    PropertyResult r{"permutation invariance", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto rc = draw_case(rng);
        std::vector<std::size_t> perm(rc.datasets.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<ProgramDataset> shuffled;
        for (const auto i : perm) shuffled.push_back(rc.datasets[i]);
        try {
            const auto base = score_datasets(rc.datasets, rc.schema, rc.tmpl, {}, partial_options()).results;
            const auto moved = score_datasets(shuffled, rc.schema, rc.tmpl, {}, partial_options()).results;
            for (std::size_t k = 0; k < perm.size(); ++k)
                if (!(moved[k] == base[perm[k]])) r.failure = "result for " + base[perm[k]].program + " changed";
        } catch (const PartialDataError&) {
        }
    }
    return r;
}

inline PropertyResult check_missing_locality(int trials, std::uint64_t seed = 7) {
    PropertyResult r{"missing-value locality", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto xs = draw_column(rng, uniform_int(rng, 2, 8), 0.2);
        const auto before = minmax_normalize(xs);
        if (!before.min) continue;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (!xs[k]) continue;
            const bool extreme = *xs[k] == *before.min || *xs[k] == *before.max;
            auto ys = xs;
            ys[k].reset();
            const auto after = minmax_normalize(ys);
            if (after.scores[k]) r.failure = "removed value still scored";
            if (extreme) continue;
            for (std::size_t i = 0; i < xs.size(); ++i)
                if (i != k && after.scores[i] != before.scores[i])
                    r.failure = "removing an interior value moved another program's score";
        }
    }
    return r;
}

inline std::vector<ProgramCategories> draw_category_table(Rng& rng, int n) {
    std::vector<ProgramCategories> out(n);
    for (int p = 0; p < n; ++p) {
        out[p].program = "P" + std::to_string(p);
        for (auto& s : out[p].scores) s = draw_value(rng);
    }
    return out;
}

inline PropertyResult check_additivity(int trials, std::uint64_t seed = 8) {
    PropertyResult r{"additivity and ranking invariance", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const auto table = draw_category_table(rng, uniform_int(rng, 1, 5));
        const auto base = compute_gmi(table);
        GmiOptions scaled;
        const double k = uniform_real(rng, 0.1, 10.0);
        for (auto& w : scaled.weights) w = k;
        const auto heavy = compute_gmi(table, scaled);
        for (std::size_t i = 0; i < base.size(); ++i) {
            double sum = 0.0;
            for (const auto& s : base[i].normalized_category_scores) sum += *s;
            if (!near(base[i].gmi, sum, 1e-12)) r.failure = "GMI is not the sum of normalized category scores";
            if (!near(heavy[i].gmi, k * base[i].gmi, 1e-9)) r.failure = "uniform weight scaling did not rescale GMI";
            if (heavy[i].stage != base[i].stage) r.failure = "uniform weight scaling changed a stage";
            for (std::size_t j = 0; j < base.size(); ++j) {
                const double d0 = base[i].gmi - base[j].gmi;
                const double d1 = heavy[i].gmi - heavy[j].gmi;
                if (std::fabs(d0) > 1e-9 && (d0 > 0) != (d1 > 0)) r.failure = "uniform weight scaling changed ranking";
            }
        }
    }
    return r;
}

inline PropertyResult check_directional_involution(int trials, std::uint64_t seed = 9) {
    PropertyResult r{"directional involution", trials, std::nullopt};
    Rng rng(seed);
    for (int t = 0; t < trials && !r.failure; ++t) {
        const double x = coin(rng, 0.1) ? uniform_int(rng, 0, 1) : uniform_real(rng, 0.0, 1.0);
        const double twice = directional_score(directional_score(x, Direction::LowerBetter), Direction::LowerBetter);
        if (!near(twice, x, 1e-15)) r.failure = "lower-better twice moved " + number_text(x);
        if (directional_score(x, Direction::HigherBetter) != x) r.failure = "higher-better is not the identity";
    }
    return r;
}

// Answer count is preserved and grouping ignores the order answers arrive in.
inline PropertyResult check_rubric_counts(int trials, std::uint64_t seed = 10) {
    PropertyResult r{"rubric answer-count preservation", trials, std::nullopt};
    Rng rng(seed);
    const auto& tmpl = builtin_template();
    for (int t = 0; t < trials && !r.failure; ++t) {
        std::vector<std::pair<std::string, int>> picked;
        for (const auto& c : tmpl.criteria())
            if (coin(rng, 0.5)) picked.emplace_back(c.id, uniform_int(rng, 1, 5));
        RubricAnswers forward(picked.begin(), picked.end());
        std::shuffle(picked.begin(), picked.end(), rng);
        RubricAnswers shuffled;
        for (const auto& [id, s] : picked) shuffled.emplace(id, s);
        const auto a = collect_responses(tmpl, forward);
        const auto b = collect_responses(tmpl, shuffled);
        std::size_t total = 0;
        for (const auto& [cat, units] : a) total += units.size();
        if (total != forward.size()) r.failure = "grouped " + std::to_string(total) + " of " + std::to_string(forward.size());
        if (a != b) r.failure = "grouping depends on answer order";
    }
    return r;
}

inline std::vector<PropertyResult> run_invariant_suites(int trials) {
    return {check_range(trials),           check_anchors(trials),
            check_monotonicity(trials),    check_affine_invariance(trials),
            check_permutation_invariance(trials), check_missing_locality(trials),
            check_additivity(trials),      check_directional_involution(trials)};
}

} // namespace gmi::testing

#endif // GMI_TESTS_PROPERTIES_HPP
