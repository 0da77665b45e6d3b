#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mutnet/align.hpp"
#include "mutnet/error.hpp"
#include "mutnet/seq.hpp"

namespace mutnet {

enum class MutKind { Substitution, Insertion, Deletion };

// A DNA-level difference against the ungapped reference. Positions are
// 1-based; an insertion's position is the reference base it lands before
// (len+1 for an insertion past the end).
struct DnaMutation {
    int nt_position = 0;
    MutKind kind = MutKind::Substitution;
    std::string ref_bases;  // empty for insertions
    std::string alt_bases;  // empty for deletions
};

enum class Structural { Substitution, Frameshift, InFrameIndel };
enum class SubstClass { Ts, Tv, NA };

// One row of the mutation-report schema: codon context, amino-acid
// consequence, event string and classification.
struct MutationRecord {
    int nt_position = 0;
    int codon_number = 0;        // ceil(nt_position / 3)
    std::string wt_codon;
    std::string mutant_codon;    // codon after change, or "insN"/"delN"
    std::string wt_aa;           // three-letter name or "Stop"
    std::string mutant_aa;       // three-letter name, "Stop", "Fs", or "inf"
    std::string event;           // "X>Y", "ins", "del"
    Structural structural = Structural::Substitution;
    SubstClass subst_class = SubstClass::NA;
    std::optional<int> stop_at;  // first downstream stop codon after a frameshift
    std::string gene_location;
    std::string cancer;
};

enum class Verdict { Normal, Silent, Malignant };

struct Diagnosis {
    Verdict verdict = Verdict::Normal;
    std::vector<DnaMutation> dna_mutations;  // empty iff Normal
    std::vector<MutationRecord> records;     // non-empty iff Malignant
    Alignment dna_alignment;                 // reference (row a) vs person (row b)
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Normal: return "Normal";
        case Verdict::Silent: return "Silent";
        default: return "Malignant";
    }
}

inline const char* to_string(Structural s) {
    switch (s) {
        case Structural::Substitution: return "Substitution";
        case Structural::Frameshift: return "Frameshift";
        default: return "InFrameIndel";
    }
}

inline const char* to_string(SubstClass c) {
    switch (c) {
        case SubstClass::Ts: return "Ts";
        case SubstClass::Tv: return "Tv";
        default: return "NA";
    }
}

/// Transition (purine<->purine or pyrimidine<->pyrimidine) vs transversion.
inline SubstClass classify_event(char ref_base, char alt_base) {
    if (!is_dna_base(ref_base) || !is_dna_base(alt_base))
        fail(errc::bad_codon, "substitution bases must be A/C/G/T");
    if (ref_base == alt_base)
        fail(errc::same_base, "substitution requires two different bases");
    auto purine = [](char b) { return b == 'A' || b == 'G'; };
    return purine(ref_base) == purine(alt_base) ? SubstClass::Ts : SubstClass::Tv;
}

/// Walk aligned columns and collect the differences: each mismatch column is
/// one single-base substitution, each maximal gap run one insertion or
/// deletion. Positions refer to the ungapped reference row.
inline std::vector<DnaMutation> call_dna_mutations(const Alignment& al) {
    std::vector<DnaMutation> out;
    int ref_pos = 0;  // last consumed reference base
    const std::string& a = al.a_gapped;
    const std::string& b = al.b_gapped;

    for (std::size_t c = 0; c < a.size(); ++c) {
        if (a[c] != '-' && b[c] != '-') {
            ++ref_pos;
            if (a[c] != b[c])
                out.push_back({ref_pos, MutKind::Substitution,
                               std::string(1, a[c]), std::string(1, b[c])});
        } else if (b[c] == '-') {
            // deletion run: reference bases missing from the person
            DnaMutation del{ref_pos + 1, MutKind::Deletion, "", ""};
            while (c < a.size() && a[c] != '-' && b[c] == '-') {
                del.ref_bases.push_back(a[c]);
                ++ref_pos;
                ++c;
            }
            --c;
            out.push_back(std::move(del));
        } else {
            // insertion run: person bases absent from the reference
            DnaMutation ins{ref_pos + 1, MutKind::Insertion, "", ""};
            while (c < a.size() && a[c] == '-' && b[c] != '-') {
                ins.alt_bases.push_back(b[c]);
                ++c;
            }
            --c;
            out.push_back(std::move(ins));
        }
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const DnaMutation& x, const DnaMutation& y) {
                         return x.nt_position < y.nt_position;
                     });
    return out;
}

/// Apply a single mutation to a reference CDS (used to build the mutant
/// sequence a frameshift scan runs over).
inline std::string apply_mutation(const std::string& ref, const DnaMutation& mut) {
    const std::size_t pos = static_cast<std::size_t>(mut.nt_position);
    switch (mut.kind) {
        case MutKind::Substitution:
            if (pos < 1 || pos - 1 + mut.ref_bases.size() > ref.size())
                fail(errc::out_of_range, "substitution outside the reference");
            return ref.substr(0, pos - 1) + mut.alt_bases +
                   ref.substr(pos - 1 + mut.ref_bases.size());
        case MutKind::Deletion:
            if (pos < 1 || pos - 1 + mut.ref_bases.size() > ref.size())
                fail(errc::out_of_range, "deletion outside the reference");
            return ref.substr(0, pos - 1) + ref.substr(pos - 1 + mut.ref_bases.size());
        default:  // Insertion lands before base `pos`
            if (pos < 1 || pos - 1 > ref.size())
                fail(errc::out_of_range, "insertion outside the reference");
            return ref.substr(0, pos - 1) + mut.alt_bases + ref.substr(pos - 1);
    }
}

/// First stop codon at or after `from_codon` in the mutant reading frame,
/// numbered from codon 1 of the mutant sequence; absent when none exists.
inline std::optional<int> stop_scan(const Sequence& mutant_cds, int from_codon) {
    if (mutant_cds.kind != SeqKind::DNA)
        fail(errc::kind_mismatch, "stop_scan requires a DNA sequence");
    if (from_codon < 1) from_codon = 1;
    const std::string& r = mutant_cds.residues;
    for (std::size_t c = static_cast<std::size_t>(from_codon);
         c * 3 <= r.size(); ++c) {
        if (codon_to_aa(std::string_view(r).substr((c - 1) * 3, 3)) == '*')
            return static_cast<int>(c);
    }
    return std::nullopt;
}

/// Codon-level consequence of one DNA mutation against the reference CDS.
inline MutationRecord codon_effect(const Sequence& ref_cds, const DnaMutation& mut) {
    if (ref_cds.kind != SeqKind::DNA)
        fail(errc::kind_mismatch, "codon_effect requires a DNA reference");
    const std::string& ref = ref_cds.residues;
    const int len = static_cast<int>(ref.size());
    const int max_pos = len + (mut.kind == MutKind::Insertion ? 1 : 0);
    if (mut.nt_position < 1 || mut.nt_position > max_pos)
        fail(errc::out_of_range,
             "mutation at nt " + std::to_string(mut.nt_position) + " is beyond the CDS");

    MutationRecord rec;
    rec.nt_position = mut.nt_position;
    rec.codon_number = (mut.nt_position + 2) / 3;

    // wt codon display: the containing codon, clamped to the last whole codon
    // for an insertion past the final base.
    int codon_for_wt = std::min(rec.codon_number, len / 3);
    if (codon_for_wt >= 1) {
        rec.wt_codon = ref.substr(static_cast<std::size_t>(codon_for_wt - 1) * 3, 3);
        rec.wt_aa = aa_three_letter(codon_to_aa(rec.wt_codon));
    }

    if (mut.kind == MutKind::Substitution) {
        if (static_cast<std::size_t>(rec.codon_number) * 3 > ref.size())
            fail(errc::out_of_range, "substitution in an incomplete trailing codon");
        std::string codon = rec.wt_codon;
        for (std::size_t k = 0; k < mut.alt_bases.size(); ++k) {
            std::size_t off = static_cast<std::size_t>(mut.nt_position - 1) % 3 + k;
            if (off < 3) codon[off] = mut.alt_bases[k];
        }
        rec.mutant_codon = codon;
        rec.mutant_aa = aa_three_letter(codon_to_aa(codon));
        rec.event = mut.ref_bases + ">" + mut.alt_bases;
        rec.structural = Structural::Substitution;
        rec.subst_class = classify_event(mut.ref_bases[0], mut.alt_bases[0]);
        return rec;
    }

    const bool insertion = (mut.kind == MutKind::Insertion);
    const std::size_t n = insertion ? mut.alt_bases.size() : mut.ref_bases.size();
    rec.mutant_codon = (insertion ? "ins" : "del") + std::to_string(n);
    rec.event = insertion ? "ins" : "del";
    rec.subst_class = SubstClass::NA;
    if (n % 3 != 0) {
        rec.structural = Structural::Frameshift;
        rec.mutant_aa = "Fs";
        Sequence mutant{ref_cds.id, apply_mutation(ref, mut), SeqKind::DNA};
        rec.stop_at = stop_scan(mutant, rec.codon_number);
    } else {
        rec.structural = Structural::InFrameIndel;
        rec.mutant_aa = "inf";
    }
    return rec;
}

/// The two-stage call: align DNA (identical => Normal), then compare the
/// translated proteins (identical => Silent, otherwise Malignant with one
/// record per protein-affecting DNA mutation).
inline Diagnosis diagnose(const Sequence& reference, const Sequence& person, Scoring scoring = {}) {
    Diagnosis d;
    d.dna_alignment = global_align(reference, person, scoring);
    if (is_identical(d.dna_alignment)) {
        d.verdict = Verdict::Normal;
        return d;
    }

    d.dna_mutations = call_dna_mutations(d.dna_alignment);

    Sequence ref_prot = translate(reference, TranslateMode::cds);
    Sequence per_prot = translate(person, TranslateMode::cds);
    Alignment prot_al = global_align(ref_prot, per_prot, scoring);
    if (is_identical(prot_al)) {
        d.verdict = Verdict::Silent;
        return d;
    }

    d.verdict = Verdict::Malignant;
    const int whole_codons = static_cast<int>(reference.residues.size()) / 3;
    for (const DnaMutation& mut : d.dna_mutations) {
        if (mut.kind == MutKind::Substitution && mut.nt_position > whole_codons * 3)
            continue;  // trailing partial codon, never translated
        MutationRecord rec = codon_effect(reference, mut);
        if (rec.structural == Structural::Substitution && rec.wt_aa == rec.mutant_aa)
            continue;  // synonymous at this codon
        d.records.push_back(std::move(rec));
    }
    if (d.records.empty()) {
        // Degenerate case: the protein changed but every mutation is locally
        // synonymous (e.g. two stop-to-stop edits combining into a read-through).
        // Report them all rather than return a malignant call with no rows.
        for (const DnaMutation& mut : d.dna_mutations) {
            if (mut.kind == MutKind::Substitution && mut.nt_position > whole_codons * 3)
                continue;
            d.records.push_back(codon_effect(reference, mut));
        }
    }
    return d;
}

} // namespace mutnet
