#pragma once

#include <cctype>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mutnet/error.hpp"

namespace mutnet {

enum class SeqKind { DNA, Protein };

// One FASTA record. residues is uppercase and limited to the alphabet of its
// kind: {A,C,G,T} for DNA, the 20 one-letter amino acids plus '*' for protein.
struct Sequence {
    std::string id;
    std::string residues;
    SeqKind kind = SeqKind::DNA;
};

inline bool is_dna_base(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

inline bool is_amino_acid(char c) {
    static constexpr std::string_view aa = "ACDEFGHIKLMNPQRSTVWY*";
    return aa.find(c) != std::string_view::npos;
}

// ---------------------------------------------------------------------------
// Standard genetic code (translation table 1), indexed by base order T,C,A,G.

namespace detail {

inline constexpr std::string_view kCodeAminoAcids =
    "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

inline int base_index(char b) {
    switch (b) {
        case 'T': return 0;
        case 'C': return 1;
        case 'A': return 2;
        case 'G': return 3;
        default: return -1;
    }
}

} // namespace detail

/// Translate one codon through the standard genetic code ('*' for stops).
inline char codon_to_aa(std::string_view codon) {
    if (codon.size() != 3)
        fail(errc::bad_codon, "codon must be exactly 3 bases, got '" + std::string(codon) + "'");
    int i0 = detail::base_index(codon[0]);
    int i1 = detail::base_index(codon[1]);
    int i2 = detail::base_index(codon[2]);
    if (i0 < 0 || i1 < 0 || i2 < 0)
        fail(errc::bad_codon, "codon contains a non-ACGT base: '" + std::string(codon) + "'");
    return detail::kCodeAminoAcids[static_cast<std::size_t>(i0 * 16 + i1 * 4 + i2)];
}

/// Three-letter amino-acid name for a one-letter code; '*' maps to "Stop".
inline std::string aa_three_letter(char aa) {
    switch (aa) {
        case 'A': return "Ala"; case 'R': return "Arg"; case 'N': return "Asn";
        case 'D': return "Asp"; case 'C': return "Cys"; case 'Q': return "Gln";
        case 'E': return "Glu"; case 'G': return "Gly"; case 'H': return "His";
        case 'I': return "Ile"; case 'L': return "Leu"; case 'K': return "Lys";
        case 'M': return "Met"; case 'F': return "Phe"; case 'P': return "Pro";
        case 'S': return "Ser"; case 'T': return "Thr"; case 'W': return "Trp";
        case 'Y': return "Tyr"; case 'V': return "Val"; case '*': return "Stop";
        default:
            fail(errc::bad_codon, std::string("unknown amino-acid code '") + aa + "'");
    }
}

// ---------------------------------------------------------------------------
// FASTA I/O

/// Parse a FASTA document. Residues are uppercased, whitespace inside
/// sequence lines is stripped, and the kind of each record is inferred:
/// DNA when every residue is in {A,C,G,T}, protein otherwise.
inline std::vector<Sequence> parse_fasta(std::istream& in) {
    std::vector<Sequence> out;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            out.push_back(Sequence{line.substr(1), "", SeqKind::DNA});
            seen_header = true;
            continue;
        }
        if (!seen_header) {
            // skip pure-whitespace junk before the first header
            bool blank = true;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
            if (blank) continue;
            fail(errc::missing_header,
                 "sequence data before any '>' header at line " + std::to_string(line_no));
        }
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (!is_amino_acid(u))
                fail(errc::illegal_character,
                     std::string("illegal residue '") + c + "' at line " + std::to_string(line_no));
            out.back().residues.push_back(u);
        }
    }

    if (out.empty()) fail(errc::empty_input, "no FASTA records found");
    for (Sequence& s : out) {
        if (s.residues.empty())
            fail(errc::empty_sequence, "record '" + s.id + "' has no residues");
        bool dna = true;
        for (char c : s.residues)
            if (!is_dna_base(c)) { dna = false; break; }
        s.kind = dna ? SeqKind::DNA : SeqKind::Protein;
    }
    return out;
}

inline std::vector<Sequence> parse_fasta(const std::string& text) {
    std::istringstream in(text);
    return parse_fasta(in);
}

/// Write records as FASTA, wrapping sequence lines at `width` characters.
inline void write_fasta(std::ostream& out, const std::vector<Sequence>& seqs,
                        std::size_t width = 60) {
    if (width == 0) width = 60;
    for (const Sequence& s : seqs) {
        out << '>' << s.id << '\n';
        for (std::size_t i = 0; i < s.residues.size(); i += width)
            out << s.residues.substr(i, width) << '\n';
    }
}

inline std::string write_fasta(const std::vector<Sequence>& seqs, std::size_t width = 60) {
    std::ostringstream out;
    write_fasta(out, seqs, width);
    return out.str();
}

// ---------------------------------------------------------------------------
// Translation

enum class TranslateMode { full, cds };

/// Translate a DNA sequence in frame 1 (offset 0). `full` keeps every codon
/// including stops; `cds` ends at the first stop, which is kept as the final
/// '*' residue. Trailing bases short of a whole codon are ignored.
inline Sequence translate(const Sequence& dna, TranslateMode mode = TranslateMode::cds) {
    if (dna.kind != SeqKind::DNA)
        fail(errc::kind_mismatch, "translate requires a DNA sequence, got protein '" + dna.id + "'");
    if (dna.residues.size() < 3)
        fail(errc::too_short, "sequence '" + dna.id + "' is shorter than one codon");

    Sequence prot{dna.id, "", SeqKind::Protein};
    const std::size_t codons = dna.residues.size() / 3;
    for (std::size_t c = 0; c < codons; ++c) {
        char aa = codon_to_aa(std::string_view(dna.residues).substr(c * 3, 3));
        prot.residues.push_back(aa);
        if (aa == '*' && mode == TranslateMode::cds) break;
    }
    return prot;
}

} // namespace mutnet
