#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mutnet/align.hpp"
#include "mutnet/dataset.hpp"
#include "mutnet/error.hpp"
#include "mutnet/model_io.hpp"
#include "mutnet/mutation.hpp"
#include "mutnet/network.hpp"
#include "mutnet/report.hpp"
#include "mutnet/seq.hpp"

namespace mutnet {

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::empty_file, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Write-to-temp-then-rename so a failed write never leaves a partial file.
inline void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::write_failed, "cannot open '" + tmp + "' for writing");
        out << bytes;
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            fail(errc::write_failed, "failed writing '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        fail(errc::write_failed, "cannot move '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

/// FNV-1a 64-bit digest, hex-encoded; identifies the exact model bytes a
/// report was produced with.
inline std::string content_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out, 16);
}

inline Sequence load_first_fasta_record(const std::string& path) {
    std::string text = read_file(path);
    std::vector<Sequence> seqs = parse_fasta(text);
    return seqs.front();
}

// ---------------------------------------------------------------------------
// Mutation record -> dataset row

/// Fill the 12-column row for a called mutation. Both WT-codon columns carry
/// the codon; the flag letter mirrors the sample's convention (B substitution,
/// F frameshift, I in-frame indel); type_1 is the constant "SN" tag.
inline Record record_from_mutation(const MutationRecord& m, const std::string& gene_location) {
    Record r;
    r.mutation_position = m.nt_position;
    r.wt_codon = m.wt_codon;
    r.wt_codon_2 = m.wt_codon;
    r.mutant = m.mutant_codon;
    r.wt_aa = m.wt_aa;
    r.mutant_aa = m.mutant_aa;
    r.event = m.event;
    switch (m.structural) {
        case Structural::Substitution: r.mutant_flag = "B"; break;
        case Structural::Frameshift: r.mutant_flag = "F"; break;
        default: r.mutant_flag = "I"; break;
    }
    r.type_1 = "SN";
    r.type_2 = m.structural == Structural::Substitution ? to_string(m.subst_class) : "Fe";
    r.gene_location = gene_location;
    r.cancer = "";
    return r;
}

// ---------------------------------------------------------------------------
// Classification

struct Prediction {
    MutationRecord mutation;
    std::string predicted_cancer;  // empty when encoding failed
    double output = 0.0;
    std::string error;             // unknown-category detail, empty on success
};

struct ClassificationReport {
    Diagnosis diagnosis;
    std::vector<Prediction> predictions;
    std::string model_id;
};

inline Prediction classify_mutation(const MutationRecord& rec, const Model& model) {
    Prediction p;
    p.mutation = rec;
    try {
        Example ex = encode_features(record_from_mutation(rec, rec.gene_location), model.encoder);
        ForwardResult r = forward(model.net, ex.x);
        p.output = r.output[0];
        p.predicted_cancer = decode_label(p.output, model.encoder);
    } catch (const error& e) {
        if (e.code() != errc::unknown_category && e.code() != errc::unknown_label) throw;
        p.error = e.what();
    }
    return p;
}

/// Sequence-driven classification: diagnose the person against the reference,
/// then classify each malignant mutation with the model's embedded encoder.
/// An unknown categorical value marks that prediction failed without
/// aborting the others.
inline ClassificationReport classify_person(const std::string& reference_fasta,
                                            const std::string& person_fasta,
                                            const std::string& model_path,
                                            const std::string& gene_location,
                                            Scoring scoring = {}) {
    Sequence reference = load_first_fasta_record(reference_fasta);
    Sequence person = load_first_fasta_record(person_fasta);
    const std::string model_bytes = read_file(model_path);
    Model model = load_model(model_bytes);

    ClassificationReport report;
    report.model_id = content_digest(model_bytes);
    report.diagnosis = diagnose(reference, person, scoring);
    for (MutationRecord& rec : report.diagnosis.records) rec.gene_location = gene_location;
    for (const MutationRecord& rec : report.diagnosis.records)
        report.predictions.push_back(classify_mutation(rec, model));
    return report;
}

/// Manual-entry classification from the 11 input fields. Validates every
/// categorical field up front so the error lists all offending values.
inline std::pair<std::string, double> classify_manual(const Record& fields, const Model& model) {
    std::string problems;
    Record probe = fields;
    for (std::size_t i = 0; i < kNumCategorical; ++i) {
        const std::vector<std::string>& vocab = model.encoder.vocabs[i];
        const std::string& value = categorical_field(probe, i);
        if (!std::binary_search(vocab.begin(), vocab.end(), value)) {
            if (!problems.empty()) problems += "; ";
            problems += std::string("unknown ") + kColumnNames[i + 1] + " '" + value +
                        "'; allowed: " + detail::join(vocab);
        }
    }
    if (!problems.empty()) fail(errc::unknown_category, problems);

    Example ex = encode_features(fields, model.encoder);
    ForwardResult r = forward(model.net, ex.x);
    double y = r.output[0];
    return {decode_label(y, model.encoder), y};
}

inline nlohmann::ordered_json to_json(const ClassificationReport& rep) {
    nlohmann::ordered_json j = to_json(rep.diagnosis);
    j["model_id"] = rep.model_id;
    nlohmann::ordered_json preds = nlohmann::ordered_json::array();
    for (const Prediction& p : rep.predictions) {
        nlohmann::ordered_json e;
        e["mutation"] = to_json(p.mutation);
        if (p.error.empty()) {
            e["predicted_cancer"] = p.predicted_cancer;
            e["output"] = p.output;
        } else {
            e["error"] = p.error;
        }
        preds.push_back(std::move(e));
    }
    j["predictions"] = std::move(preds);
    return j;
}

// ---------------------------------------------------------------------------
// Training and evaluation

struct TrainOutcome {
    TrainReport report;
    double train_accuracy = 0.0;
    std::optional<double> held_out_accuracy;
    std::string model_id;
};

inline std::vector<Sample> encode_all(const std::vector<Record>& records, const Encoder& enc) {
    std::vector<Sample> samples;
    samples.reserve(records.size());
    for (const Record& r : records) {
        Example ex = encode(r, enc);
        samples.push_back({std::vector<double>(ex.x.begin(), ex.x.end()), {ex.t}});
    }
    return samples;
}

inline double classification_accuracy(const Model& model, const std::vector<Record>& records) {
    if (records.empty()) return 0.0;
    std::size_t correct = 0;
    for (const Record& r : records) {
        try {
            Example ex = encode_features(r, model.encoder);
            ForwardResult fr = forward(model.net, ex.x);
            if (decode_label(fr.output[0], model.encoder) == r.cancer) ++correct;
        } catch (const error& e) {
            if (e.code() != errc::unknown_category && e.code() != errc::unknown_label) throw;
            // unencodable row counts as a miss
        }
    }
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

/// Fit the encoder on the training rows, train the network, and save the
/// model atomically. With test_fraction > 0 the held-out rows are scored
/// after training.
inline TrainOutcome run_training(const std::string& csv_path, Topology topology,
                                 const TrainConfig& cfg, const std::string& out_path,
                                 double test_fraction = 0.0,
                                 const std::function<void(std::size_t, double)>& on_epoch = {}) {
    std::string text = read_file(csv_path);
    std::vector<Record> all = load_records(text);

    std::vector<Record> train_rows = all;
    std::vector<Record> test_rows;
    if (test_fraction > 0.0)
        std::tie(train_rows, test_rows) = split(all, test_fraction, cfg.seed);

    Encoder enc = fit_encoder(train_rows);
    std::vector<Sample> samples = encode_all(train_rows, enc);

    Network net = init_network(topology, cfg.seed);
    TrainOutcome outcome;
    outcome.report = train(net, samples, cfg, on_epoch);

    const std::string bytes = save_model(net, enc);
    atomic_write_file(out_path, bytes);
    outcome.model_id = content_digest(bytes);

    Model model{std::move(net), std::move(enc)};
    outcome.train_accuracy = classification_accuracy(model, train_rows);
    if (!test_rows.empty())
        outcome.held_out_accuracy = classification_accuracy(model, test_rows);
    return outcome;
}

struct EvalResult {
    double mse = 0.0;
    double accuracy = 0.0;
};

inline EvalResult evaluate(const std::string& model_path, const std::string& csv_path) {
    Model model = load_model(read_file(model_path));
    std::vector<Record> rows = load_records(read_file(csv_path));
    std::vector<Sample> samples = encode_all(rows, model.encoder);
    EvalResult r;
    r.mse = mse(model.net, samples);
    r.accuracy = classification_accuracy(model, rows);
    return r;
}

} // namespace mutnet
