#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mutnet/error.hpp"
#include "mutnet/seq.hpp"

namespace mutnet {

// Linear gap model. match > mismatch, gap < 0.
struct Scoring {
    int match = 1;
    int mismatch = -1;
    int gap = -2;
};

struct Alignment {
    std::string a_gapped;   // row a with '-' for gaps
    std::string b_gapped;   // row b, same length
    int score = 0;
    double identity = 0.0;  // matching columns / alignment length
};

/// Needleman-Wunsch global alignment with linear gap penalties.
/// Traceback ties break diagonal > up (gap in b) > left (gap in a), so the
/// result is deterministic and favors substitutions over gaps.
inline Alignment global_align(const Sequence& a, const Sequence& b, Scoring s = {}) {
    if (a.kind != b.kind)
        fail(errc::kind_mismatch,
             "cannot align '" + a.id + "' and '" + b.id + "': DNA vs protein");
    if (a.residues.empty() || b.residues.empty())
        fail(errc::empty_sequence, "cannot align an empty sequence");

    const std::string& ra = a.residues;
    const std::string& rb = b.residues;
    const std::size_t n = ra.size();
    const std::size_t m = rb.size();

    std::vector<int> dp((n + 1) * (m + 1));
    auto cell = [&](std::size_t i, std::size_t j) -> int& { return dp[i * (m + 1) + j]; };

    for (std::size_t i = 0; i <= n; ++i) cell(i, 0) = static_cast<int>(i) * s.gap;
    for (std::size_t j = 0; j <= m; ++j) cell(0, j) = static_cast<int>(j) * s.gap;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            int sub = cell(i - 1, j - 1) + (ra[i - 1] == rb[j - 1] ? s.match : s.mismatch);
            int del = cell(i - 1, j) + s.gap;
            int ins = cell(i, j - 1) + s.gap;
            cell(i, j) = std::max({sub, del, ins});
        }
    }

    Alignment al;
    al.score = cell(n, m);

    std::string ga, gb;
    ga.reserve(n + m);
    gb.reserve(n + m);
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            cell(i, j) == cell(i - 1, j - 1) + (ra[i - 1] == rb[j - 1] ? s.match : s.mismatch)) {
            ga.push_back(ra[i - 1]);
            gb.push_back(rb[j - 1]);
            --i; --j;
        } else if (i > 0 && cell(i, j) == cell(i - 1, j) + s.gap) {
            ga.push_back(ra[i - 1]);
            gb.push_back('-');
            --i;
        } else {
            ga.push_back('-');
            gb.push_back(rb[j - 1]);
            --j;
        }
    }
    std::reverse(ga.begin(), ga.end());
    std::reverse(gb.begin(), gb.end());
    al.a_gapped = std::move(ga);
    al.b_gapped = std::move(gb);

    std::size_t matches = 0;
    for (std::size_t c = 0; c < al.a_gapped.size(); ++c)
        if (al.a_gapped[c] == al.b_gapped[c]) ++matches;
    al.identity = static_cast<double>(matches) / static_cast<double>(al.a_gapped.size());
    return al;
}

/// True iff every column matches and no gaps were introduced.
inline bool is_identical(const Alignment& al) {
    if (al.identity != 1.0) return false;
    return al.a_gapped.find('-') == std::string::npos &&
           al.b_gapped.find('-') == std::string::npos;
}

} // namespace mutnet
