#ifndef GMI_TESTS_ORACLE_HPP
#define GMI_TESTS_ORACLE_HPP

// Brute-force reference for the raw-indicator pipeline. Deliberately shares
// no code with include/gmi: plain loops over plain structs.

#include <array>
#include <optional>
#include <vector>

namespace gmi::testing {

struct OracleIndicator {
    int category = 0;        // 0..5
    bool lower_better = false;
    std::vector<std::optional<double>> values; // one per program
};

struct OracleInstance {
    int programs = 0;
    std::vector<OracleIndicator> indicators;
    // rubric[p][c] = raw 1..5 answers of program p in category c
    std::vector<std::array<std::vector<int>, 6>> rubric;
};

struct OracleResult {
    bool error = false; // some program has no category at all
    std::vector<double> gmi;
    std::vector<std::array<std::optional<double>, 6>> category;
};

inline std::vector<std::optional<double>> oracle_scale(const std::vector<std::optional<double>>& xs) {
    bool any = false;
    double lo = 0, hi = 0;
    for (const auto& x : xs) {
        if (!x) continue;
        if (!any || *x < lo) lo = *x;
        if (!any || *x > hi) hi = *x;
        any = true;
    }
    std::vector<std::optional<double>> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i]) continue;
        if (lo == hi) out[i] = 0.5;
        else out[i] = (*xs[i] - lo) / (hi - lo);
    }
    return out;
}

inline OracleResult oracle_run(const OracleInstance& inst) {
    const int n = inst.programs;
    OracleResult res;
    res.category.assign(n, {});

    std::vector<std::array<std::vector<double>, 6>> parts(n);
    for (const auto& ind : inst.indicators) {
        const auto scaled = oracle_scale(ind.values);
        for (int p = 0; p < n; ++p) {
            if (!scaled[p]) continue;
            parts[p][ind.category].push_back(ind.lower_better ? 1.0 - *scaled[p] : *scaled[p]);
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int c = 0; c < 6; ++c) {
            double total = 0;
            int count = 0;
            for (double v : parts[p][c]) {
                total += v;
                ++count;
            }
            const auto& answers = inst.rubric[p][c];
            if (!answers.empty()) {
                double r = 0;
                for (int a : answers) r += (a - 1) / 4.0;
                total += r / answers.size();
                ++count;
            }
            if (count > 0) res.category[p][c] = total / count;
        }
    }

    res.gmi.assign(n, 0.0);
    std::vector<int> present(n, 0);
    for (int c = 0; c < 6; ++c) {
        std::vector<std::optional<double>> column(n);
        for (int p = 0; p < n; ++p) column[p] = res.category[p][c];
        const auto scaled = oracle_scale(column);
        for (int p = 0; p < n; ++p) {
            if (!scaled[p]) continue;
            res.gmi[p] += *scaled[p];
            ++present[p];
        }
    }
    for (int p = 0; p < n; ++p) {
        if (present[p] == 0) res.error = true;
        else if (present[p] < 6) res.gmi[p] = res.gmi[p] * 6.0 / present[p];
    }
    return res;
}

} // namespace gmi::testing

#endif // GMI_TESTS_ORACLE_HPP
