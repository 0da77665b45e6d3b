// mutnet command-line interface: detect mutations, train the classifier,
// classify a person or a manually entered record, evaluate a model.
//
// Exit codes: 0 success, 1 failure (e.g. training goal missed), 2 usage,
// 3 input parse error, 4 model error, 5 unknown category.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mutnet/align.hpp"
#include "mutnet/dataset.hpp"
#include "mutnet/error.hpp"
#include "mutnet/model_io.hpp"
#include "mutnet/mutation.hpp"
#include "mutnet/network.hpp"
#include "mutnet/pipeline.hpp"
#include "mutnet/report.hpp"
#include "mutnet/seq.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitModel = 4;
constexpr int kExitUnknownCategory = 5;

int exit_code_for(mutnet::errc code) {
    switch (code) {
        case mutnet::errc::unknown_category:
        case mutnet::errc::unknown_label:
            return kExitUnknownCategory;
        case mutnet::errc::bad_magic:
        case mutnet::errc::version_unsupported:
        case mutnet::errc::truncated_file:
        case mutnet::errc::dimension_mismatch:
        case mutnet::errc::zero_dimension:
        case mutnet::errc::write_failed:
            return kExitModel;
        default:
            return kExitParse;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

mutnet::Topology parse_topology(const std::string& text) {
    mutnet::Topology t;
    unsigned long a = 0, b = 0, c = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lu,%lu,%lu%c", &a, &b, &c, &extra) != 3 ||
        a == 0 || b == 0 || c == 0)
        throw UsageError("--topology must be three positive integers, e.g. 11,100,1");
    t.n_in = a;
    t.n_hidden = b;
    t.n_out = c;
    return t;
}

void emit_report(const nlohmann::ordered_json& j, const std::string& out_path) {
    std::string bytes = mutnet::render_report(j);
    std::cout << bytes;
    if (!out_path.empty()) mutnet::atomic_write_file(out_path, bytes);
}

int cmd_detect(const std::string& ref_path, const std::string& person_path,
               mutnet::Scoring scoring, const std::string& out_path) {
    mutnet::Sequence reference = mutnet::load_first_fasta_record(ref_path);
    mutnet::Sequence person = mutnet::load_first_fasta_record(person_path);
    mutnet::Diagnosis d = mutnet::diagnose(reference, person, scoring);
    emit_report(mutnet::to_json(d), out_path);
    std::cerr << "verdict: " << mutnet::to_string(d.verdict) << " ("
              << d.records.size() << " protein-affecting of "
              << d.dna_mutations.size() << " DNA mutations)\n";
    return 0;
}

int cmd_align(const std::string& a_path, const std::string& b_path) {
    mutnet::Sequence a = mutnet::load_first_fasta_record(a_path);
    mutnet::Sequence b = mutnet::load_first_fasta_record(b_path);
    mutnet::Alignment al = mutnet::global_align(a, b);
    std::cout << al.a_gapped << '\n' << al.b_gapped << '\n'
              << "score: " << al.score << '\n';
    return 0;
}

int cmd_translate(const std::string& in_path, const std::string& mode) {
    mutnet::TranslateMode m =
        mode == "full" ? mutnet::TranslateMode::full : mutnet::TranslateMode::cds;
    std::vector<mutnet::Sequence> seqs = mutnet::parse_fasta(mutnet::read_file(in_path));
    std::vector<mutnet::Sequence> prots;
    prots.reserve(seqs.size());
    for (const mutnet::Sequence& s : seqs) prots.push_back(mutnet::translate(s, m));
    mutnet::write_fasta(std::cout, prots);
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& topology_text,
              const mutnet::TrainConfig& cfg, double test_fraction,
              std::size_t log_every, const std::string& out_path) {
    mutnet::Topology topology = parse_topology(topology_text);
    auto logger = [&](std::size_t epoch, double mse) {
        if (log_every > 0 && epoch % log_every == 0)
            std::cerr << "epoch " << epoch << " mse " << mse << '\n';
    };
    mutnet::TrainOutcome outcome =
        mutnet::run_training(data_path, topology, cfg, out_path, test_fraction, logger);

    nlohmann::ordered_json j;
    j["epochs_run"] = outcome.report.epochs_run;
    j["final_mse"] = outcome.report.final_mse;
    j["stopped_by"] = outcome.report.stopped_by == mutnet::StopReason::GoalReached
                          ? "GoalReached" : "MaxEpochs";
    j["train_accuracy"] = outcome.train_accuracy;
    if (outcome.held_out_accuracy) j["held_out_accuracy"] = *outcome.held_out_accuracy;
    j["model_path"] = out_path;
    j["model_id"] = outcome.model_id;
    std::cout << mutnet::render_report(j);

    std::cerr << "trained " << outcome.report.epochs_run << " epochs, final mse "
              << outcome.report.final_mse << ", training accuracy "
              << outcome.train_accuracy << '\n';
    bool ok = outcome.report.stopped_by == mutnet::StopReason::GoalReached ||
              outcome.train_accuracy == 1.0;
    return ok ? 0 : 1;
}

int cmd_classify_sequence(const std::string& model_path, const std::string& ref_path,
                          const std::string& person_path, const std::string& gene_location,
                          const std::string& out_path) {
    mutnet::ClassificationReport rep =
        mutnet::classify_person(ref_path, person_path, model_path, gene_location);
    emit_report(mutnet::to_json(rep), out_path);

    std::cerr << "verdict: " << mutnet::to_string(rep.diagnosis.verdict) << '\n';
    bool any_unknown = false;
    for (const mutnet::Prediction& p : rep.predictions) {
        if (!p.error.empty()) {
            any_unknown = true;
            std::cerr << "  nt " << p.mutation.nt_position << ": " << p.error << '\n';
        } else {
            std::cerr << "  nt " << p.mutation.nt_position << " -> "
                      << p.predicted_cancer << " (y=" << p.output << ")\n";
        }
    }
    return any_unknown ? kExitUnknownCategory : 0;
}

int cmd_classify_manual(const std::string& model_path,
                        const std::vector<std::string>& sets,
                        const std::string& out_path) {
    std::map<std::string, std::string> kv;
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError("--set expects field=value, got '" + s + "'");
        std::string key = s.substr(0, eq);
        if (kv.count(key)) throw UsageError("duplicate --set field '" + key + "'");
        kv[key] = s.substr(eq + 1);
    }
    for (std::size_t i = 0; i + 1 < mutnet::kColumnNames.size(); ++i)
        if (!kv.count(mutnet::kColumnNames[i]))
            throw UsageError(std::string("manual mode needs --set ") +
                             mutnet::kColumnNames[i] + "=...");
    for (const auto& [key, value] : kv) {
        bool known = false;
        for (std::size_t i = 0; i + 1 < mutnet::kColumnNames.size(); ++i)
            if (key == mutnet::kColumnNames[i]) known = true;
        if (!known) throw UsageError("unknown --set field '" + key + "'");
    }

    mutnet::Record r;
    const std::string& pos = kv["mutation_position"];
    try {
        std::size_t used = 0;
        long v = std::stol(pos, &used);
        if (used != pos.size() || v < 1) throw std::invalid_argument(pos);
        r.mutation_position = static_cast<int>(v);
    } catch (const std::exception&) {
        mutnet::fail(mutnet::errc::bad_integer,
                     "mutation_position '" + pos + "' is not a positive integer");
    }
    r.wt_codon = kv["wt_codon"];
    r.wt_codon_2 = kv["wt_codon_2"];
    r.mutant = kv["mutant"];
    r.wt_aa = kv["wt_aa"];
    r.mutant_aa = kv["mutant_aa"];
    r.event = kv["event"];
    r.mutant_flag = kv["mutant_flag"];
    r.type_1 = kv["type_1"];
    r.type_2 = kv["type_2"];
    r.gene_location = kv["gene_location"];

    const std::string model_bytes = mutnet::read_file(model_path);
    mutnet::Model model = mutnet::load_model(model_bytes);
    auto [label, y] = mutnet::classify_manual(r, model);

    nlohmann::ordered_json j;
    j["predicted_cancer"] = label;
    j["output"] = y;
    j["model_id"] = mutnet::content_digest(model_bytes);
    emit_report(j, out_path);
    std::cerr << "predicted: " << label << " (y=" << y << ")\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path) {
    mutnet::EvalResult r = mutnet::evaluate(model_path, data_path);
    nlohmann::ordered_json j;
    j["mse"] = r.mse;
    j["accuracy"] = r.accuracy;
    std::cout << mutnet::render_report(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TP53 mutation detection and cancer classification toolkit"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "Diagnose mutations in a person's CDS");
    std::string det_ref, det_person, det_out;
    mutnet::Scoring det_scoring;
    detect->add_option("--reference", det_ref, "reference CDS FASTA")->required();
    detect->add_option("--person", det_person, "person CDS FASTA")->required();
    detect->add_option("--match", det_scoring.match, "match score");
    detect->add_option("--mismatch", det_scoring.mismatch, "mismatch score");
    detect->add_option("--gap", det_scoring.gap, "gap score");
    detect->add_option("--out", det_out, "also write the JSON report here");

    // align
    auto* align = app.add_subcommand("align", "Globally align two sequences");
    std::string al_a, al_b;
    align->add_option("--a", al_a, "first FASTA")->required();
    align->add_option("--b", al_b, "second FASTA")->required();

    // translate
    auto* translate = app.add_subcommand("translate", "Translate DNA records to protein");
    std::string tr_in, tr_mode = "cds";
    translate->add_option("--in", tr_in, "DNA FASTA")->required();
    translate->add_option("--mode", tr_mode, "cds (stop-truncated) or full")
        ->check(CLI::IsMember({"cds", "full"}));

    // train
    auto* train = app.add_subcommand("train", "Train the classifier on a mutation table");
    std::string trn_data, trn_topology = "11,100,1", trn_out;
    mutnet::TrainConfig trn_cfg;
    double trn_fraction = 0.0;
    std::size_t trn_log_every = 1000;
    train->add_option("--data", trn_data, "training CSV")->required();
    train->add_option("--topology", trn_topology, "n_in,n_hidden,n_out");
    train->add_option("--lr", trn_cfg.alpha, "learning rate");
    train->add_option("--goal-mse", trn_cfg.goal_mse, "stop once epoch MSE reaches this");
    train->add_option("--max-epochs", trn_cfg.max_epochs, "epoch cap");
    train->add_option("--seed", trn_cfg.seed, "RNG seed for init and shuffling");
    train->add_flag("--shuffle", trn_cfg.shuffle_each_epoch, "reshuffle samples every epoch");
    train->add_option("--test-fraction", trn_fraction, "hold out this fraction for evaluation")
        ->check(CLI::Range(0.0, 0.999));
    train->add_option("--log-every", trn_log_every, "epoch interval for MSE logging (0 = quiet)");
    train->add_option("--out", trn_out, "model output path")->required();

    // classify
    auto* classify = app.add_subcommand("classify", "Predict cancer type for a person or record");
    std::string cls_model, cls_ref, cls_person, cls_location, cls_out;
    std::vector<std::string> cls_sets;
    classify->add_option("--model", cls_model, "trained model JSON")->required();
    classify->add_option("--reference", cls_ref, "reference CDS FASTA");
    classify->add_option("--person", cls_person, "person CDS FASTA");
    classify->add_option("--gene-location", cls_location, "tissue the sample came from");
    classify->add_option("--set", cls_sets, "manual mode: field=value, once per input field");
    classify->add_option("--out", cls_out, "also write the JSON report here");

    // eval
    auto* eval = app.add_subcommand("eval", "Score a model against a labeled table");
    std::string ev_model, ev_data;
    eval->add_option("--model", ev_model, "trained model JSON")->required();
    eval->add_option("--data", ev_data, "labeled CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*detect) return cmd_detect(det_ref, det_person, det_scoring, det_out);
        if (*align) return cmd_align(al_a, al_b);
        if (*translate) return cmd_translate(tr_in, tr_mode);
        if (*train)
            return cmd_train(trn_data, trn_topology, trn_cfg, trn_fraction,
                             trn_log_every, trn_out);
        if (*classify) {
            const bool manual = !cls_sets.empty();
            const bool sequence = !cls_ref.empty() || !cls_person.empty();
            if (manual && sequence)
                throw UsageError("use either --reference/--person or --set, not both");
            if (manual) return cmd_classify_manual(cls_model, cls_sets, cls_out);
            if (cls_ref.empty() || cls_person.empty() || cls_location.empty())
                throw UsageError(
                    "sequence mode needs --reference, --person and --gene-location");
            return cmd_classify_sequence(cls_model, cls_ref, cls_person, cls_location, cls_out);
        }
        if (*eval) return cmd_eval(ev_model, ev_data);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mutnet::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
