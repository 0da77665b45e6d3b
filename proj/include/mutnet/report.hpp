#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mutnet/mutation.hpp"

namespace mutnet {

inline nlohmann::ordered_json to_json(const MutationRecord& r) {
    nlohmann::ordered_json j;
    j["mutation_position"] = r.nt_position;
    j["codon_number"] = r.codon_number;
    j["wt_codon"] = r.wt_codon;
    j["mutant"] = r.mutant_codon;
    j["wt_aa"] = r.wt_aa;
    j["mutant_aa"] = r.mutant_aa;
    j["event"] = r.event;
    j["structural"] = to_string(r.structural);
    j["type"] = to_string(r.subst_class);
    if (r.stop_at) j["stop_at"] = *r.stop_at;
    j["gene_location"] = r.gene_location;
    j["cancer"] = r.cancer;
    return j;
}

inline nlohmann::ordered_json to_json(const DnaMutation& m) {
    nlohmann::ordered_json j;
    j["nt_position"] = m.nt_position;
    j["kind"] = m.kind == MutKind::Substitution ? "Substitution"
               : m.kind == MutKind::Insertion  ? "Insertion"
                                               : "Deletion";
    j["ref"] = m.ref_bases;
    j["alt"] = m.alt_bases;
    return j;
}

/// The `detect` output contract: verdict, gapped alignment rows, DNA-level
/// events (kept even for Silent calls), and the full mutation records.
inline nlohmann::ordered_json to_json(const Diagnosis& d) {
    nlohmann::ordered_json j;
    j["verdict"] = to_string(d.verdict);
    nlohmann::ordered_json al;
    al["reference"] = d.dna_alignment.a_gapped;
    al["person"] = d.dna_alignment.b_gapped;
    al["score"] = d.dna_alignment.score;
    al["identity"] = d.dna_alignment.identity;
    j["alignment"] = std::move(al);
    j["dna_mutations"] = nlohmann::ordered_json::array();
    for (const DnaMutation& m : d.dna_mutations) j["dna_mutations"].push_back(to_json(m));
    j["mutations"] = nlohmann::ordered_json::array();
    for (const MutationRecord& r : d.records) j["mutations"].push_back(to_json(r));
    return j;
}

inline std::string render_report(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace mutnet
