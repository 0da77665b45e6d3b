#pragma once

// Shared test utilities: random generators and independent oracles kept
// deliberately separate from the library implementation paths they check.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mutnet/align.hpp"
#include "mutnet/mutation.hpp"
#include "mutnet/seq.hpp"

namespace testutil {

inline std::string random_dna(std::mt19937_64& rng, std::size_t len) {
    static constexpr char bases[] = {'A', 'C', 'G', 'T'};
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(bases[rng() % 4]);
    return s;
}

inline std::string random_protein(std::mt19937_64& rng, std::size_t len) {
    static constexpr std::string_view aa = "ACDEFGHIKLMNPQRSTVWY*";
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(aa[rng() % aa.size()]);
    return s;
}

// Exhaustive maximum over every global alignment of a and b: at each point
// consume a column of both rows, or one row against a gap. No DP table, no
// traceback; this is the scoring oracle for global_align.
inline int brute_force_align_score(const std::string& a, const std::string& b,
                                   mutnet::Scoring s, std::size_t i = 0, std::size_t j = 0) {
    if (i == a.size() && j == b.size()) return 0;
    int best = std::numeric_limits<int>::min();
    if (i < a.size() && j < b.size())
        best = std::max(best, (a[i] == b[j] ? s.match : s.mismatch) +
                                  brute_force_align_score(a, b, s, i + 1, j + 1));
    if (i < a.size())
        best = std::max(best, s.gap + brute_force_align_score(a, b, s, i + 1, j));
    if (j < b.size())
        best = std::max(best, s.gap + brute_force_align_score(a, b, s, i, j + 1));
    return best;
}

// The standard genetic code written out entry by entry, as a second source
// independent of the indexed table inside the library.
inline const std::map<std::string, char>& genetic_code_oracle() {
    static const std::map<std::string, char> table = {
        {"TTT", 'F'}, {"TTC", 'F'}, {"TTA", 'L'}, {"TTG", 'L'},
        {"CTT", 'L'}, {"CTC", 'L'}, {"CTA", 'L'}, {"CTG", 'L'},
        {"ATT", 'I'}, {"ATC", 'I'}, {"ATA", 'I'}, {"ATG", 'M'},
        {"GTT", 'V'}, {"GTC", 'V'}, {"GTA", 'V'}, {"GTG", 'V'},
        {"TCT", 'S'}, {"TCC", 'S'}, {"TCA", 'S'}, {"TCG", 'S'},
        {"CCT", 'P'}, {"CCC", 'P'}, {"CCA", 'P'}, {"CCG", 'P'},
        {"ACT", 'T'}, {"ACC", 'T'}, {"ACA", 'T'}, {"ACG", 'T'},
        {"GCT", 'A'}, {"GCC", 'A'}, {"GCA", 'A'}, {"GCG", 'A'},
        {"TAT", 'Y'}, {"TAC", 'Y'}, {"TAA", '*'}, {"TAG", '*'},
        {"CAT", 'H'}, {"CAC", 'H'}, {"CAA", 'Q'}, {"CAG", 'Q'},
        {"AAT", 'N'}, {"AAC", 'N'}, {"AAA", 'K'}, {"AAG", 'K'},
        {"GAT", 'D'}, {"GAC", 'D'}, {"GAA", 'E'}, {"GAG", 'E'},
        {"TGT", 'C'}, {"TGC", 'C'}, {"TGA", '*'}, {"TGG", 'W'},
        {"CGT", 'R'}, {"CGC", 'R'}, {"CGA", 'R'}, {"CGG", 'R'},
        {"AGT", 'S'}, {"AGC", 'S'}, {"AGA", 'R'}, {"AGG", 'R'},
        {"GGT", 'G'}, {"GGC", 'G'}, {"GGA", 'G'}, {"GGG", 'G'},
    };
    return table;
}

inline std::vector<std::string> all_codons() {
    std::vector<std::string> out;
    static constexpr char bases[] = {'A', 'C', 'G', 'T'};
    for (char a : bases)
        for (char b : bases)
            for (char c : bases) out.push_back(std::string{a, b, c});
    return out;
}

// Rebuild the person's sequence by applying called mutations to the
// reference, back to front so positions stay valid. At a shared position the
// substitution/deletion must run before the insertion that lands there.
inline std::string apply_all(const std::string& reference,
                             std::vector<mutnet::DnaMutation> muts) {
    auto rank = [](const mutnet::DnaMutation& m) {
        return m.nt_position * 2 + (m.kind == mutnet::MutKind::Insertion ? 0 : 1);
    };
    std::stable_sort(muts.begin(), muts.end(),
                     [&](const mutnet::DnaMutation& a, const mutnet::DnaMutation& b) {
                         return rank(a) > rank(b);
                     });
    std::string s = reference;
    for (const mutnet::DnaMutation& m : muts) s = mutnet::apply_mutation(s, m);
    return s;
}

} // namespace testutil
