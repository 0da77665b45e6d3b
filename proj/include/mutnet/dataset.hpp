#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mutnet/error.hpp"

namespace mutnet {

// One row of the 12-column mutation table. The two WT-codon columns and the
// single-letter mutant flag are carried verbatim as opaque categoricals.
struct Record {
    int mutation_position = 0;
    std::string wt_codon;
    std::string wt_codon_2;
    std::string mutant;
    std::string wt_aa;
    std::string mutant_aa;
    std::string event;
    std::string mutant_flag;
    std::string type_1;
    std::string type_2;
    std::string gene_location;
    std::string cancer;
};

inline constexpr std::size_t kNumInputs = 11;
inline constexpr std::size_t kNumCategorical = 10;

inline constexpr std::array<const char*, 12> kColumnNames = {
    "mutation_position", "wt_codon", "wt_codon_2", "mutant", "wt_aa", "mutant_aa",
    "event", "mutant_flag", "type_1", "type_2", "gene_location", "cancer"};

/// Categorical input fields in column order (everything but position and label).
inline const std::string& categorical_field(const Record& r, std::size_t i) {
    switch (i) {
        case 0: return r.wt_codon;
        case 1: return r.wt_codon_2;
        case 2: return r.mutant;
        case 3: return r.wt_aa;
        case 4: return r.mutant_aa;
        case 5: return r.event;
        case 6: return r.mutant_flag;
        case 7: return r.type_1;
        case 8: return r.type_2;
        default: return r.gene_location;
    }
}

struct Example {
    std::array<double, kNumInputs> x{};
    double t = 0.0;
};

// Fitted vocabularies: one sorted list per categorical field, the observed
// position range, and the sorted label list.
struct Encoder {
    int position_min = 0;
    int position_max = 0;
    std::array<std::vector<std::string>, kNumCategorical> vocabs;
    std::vector<std::string> labels;
};

// ---------------------------------------------------------------------------
// CSV ingestion (RFC-4180 quoting, header matched case-insensitively)

namespace detail {

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_row(const std::string& line, std::size_t row_no) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur.push_back('"'); ++i; }
                else quoted = false;
            } else cur.push_back(c);
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted)
        fail(errc::malformed, "unterminated quote in CSV row " + std::to_string(row_no));
    cells.push_back(std::move(cur));
    return cells;
}

} // namespace detail

/// Load the 12-column table. Column order is free; names are matched
/// case-insensitively; extra columns are ignored.
inline std::vector<Record> load_records(std::istream& in) {
    std::string line;
    std::size_t row_no = 0;

    // header
    std::string header;
    while (std::getline(in, header)) {
        ++row_no;
        if (!header.empty() && header.back() == '\r') header.pop_back();
        if (!detail::trim(header).empty()) break;
        header.clear();
    }
    if (detail::trim(header).empty()) fail(errc::empty_file, "CSV has no content");

    std::vector<std::string> names = detail::split_csv_row(header, row_no);
    for (std::string& n : names) n = detail::lower(detail::trim(n));
    std::array<std::size_t, 12> col{};
    for (std::size_t k = 0; k < kColumnNames.size(); ++k) {
        auto it = std::find(names.begin(), names.end(), kColumnNames[k]);
        if (it == names.end())
            fail(errc::missing_column, std::string("missing CSV column '") + kColumnNames[k] + "'");
        col[k] = static_cast<std::size_t>(it - names.begin());
    }

    std::vector<Record> records;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> cells = detail::split_csv_row(line, row_no);
        if (cells.size() < names.size())
            fail(errc::malformed, "row " + std::to_string(row_no) + " has " +
                                      std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(names.size()));
        Record r;
        const std::string& pos = cells[col[0]];
        try {
            std::size_t used = 0;
            long v = std::stol(pos, &used);
            if (used != pos.size() || v < 1) throw std::invalid_argument(pos);
            r.mutation_position = static_cast<int>(v);
        } catch (const std::exception&) {
            fail(errc::bad_integer, "row " + std::to_string(row_no) +
                                        ": mutation_position '" + pos +
                                        "' is not a positive integer");
        }
        r.wt_codon = cells[col[1]];
        r.wt_codon_2 = cells[col[2]];
        r.mutant = cells[col[3]];
        r.wt_aa = cells[col[4]];
        r.mutant_aa = cells[col[5]];
        r.event = cells[col[6]];
        r.mutant_flag = cells[col[7]];
        r.type_1 = cells[col[8]];
        r.type_2 = cells[col[9]];
        r.gene_location = cells[col[10]];
        r.cancer = cells[col[11]];
        records.push_back(std::move(r));
    }
    if (records.empty()) fail(errc::empty_file, "CSV has a header but no data rows");
    return records;
}

inline std::vector<Record> load_records(const std::string& text) {
    std::istringstream in(text);
    return load_records(in);
}

// ---------------------------------------------------------------------------
// Encoder

/// Build sorted vocabularies and the position range. Deterministic: any
/// permutation of the same records fits to an identical encoder.
inline Encoder fit_encoder(const std::vector<Record>& records) {
    if (records.empty()) fail(errc::empty_records, "cannot fit an encoder on zero records");

    Encoder e;
    e.position_min = records.front().mutation_position;
    e.position_max = records.front().mutation_position;
    std::array<std::set<std::string>, kNumCategorical> values;
    std::set<std::string> labels;
    for (const Record& r : records) {
        e.position_min = std::min(e.position_min, r.mutation_position);
        e.position_max = std::max(e.position_max, r.mutation_position);
        for (std::size_t i = 0; i < kNumCategorical; ++i)
            values[i].insert(categorical_field(r, i));
        labels.insert(r.cancer);
    }
    if (labels.size() < 2)
        fail(errc::single_class, "training records contain fewer than 2 cancer labels");
    for (std::size_t i = 0; i < kNumCategorical; ++i)
        e.vocabs[i].assign(values[i].begin(), values[i].end());
    e.labels.assign(labels.begin(), labels.end());
    return e;
}

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += "'" + v[i] + "'";
    }
    return out;
}

} // namespace detail

/// Index of a categorical value in its sorted vocabulary.
inline std::size_t vocab_index(const std::vector<std::string>& vocab, const std::string& value,
                               const char* field, errc code) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
    if (it == vocab.end() || *it != value)
        fail(code, std::string("unknown ") + field + " '" + value +
                       "'; allowed: " + detail::join(vocab));
    return static_cast<std::size_t>(it - vocab.begin());
}

/// Map a record to the 11-input vector (position scaled into [0,1], each
/// categorical as sorted-index / (|V|-1)) and the scalar class target.
inline Example encode(const Record& r, const Encoder& e) {
    Example ex;
    if (e.position_max == e.position_min) {
        ex.x[0] = 0.5;
    } else {
        double u = static_cast<double>(r.mutation_position - e.position_min) /
                   static_cast<double>(e.position_max - e.position_min);
        ex.x[0] = std::clamp(u, 0.0, 1.0);
    }
    for (std::size_t i = 0; i < kNumCategorical; ++i) {
        const std::vector<std::string>& vocab = e.vocabs[i];
        std::size_t idx = vocab_index(vocab, categorical_field(r, i),
                                      kColumnNames[i + 1], errc::unknown_category);
        ex.x[i + 1] = vocab.size() == 1
                          ? 0.0
                          : static_cast<double>(idx) / static_cast<double>(vocab.size() - 1);
    }
    std::size_t li = vocab_index(e.labels, r.cancer, "cancer label", errc::unknown_label);
    ex.t = static_cast<double>(li) / static_cast<double>(e.labels.size() - 1);
    return ex;
}

/// Encode the 11 input fields only (label left at 0); for inference paths
/// where the record carries no cancer label.
inline Example encode_features(const Record& r, const Encoder& e) {
    Record labeled = r;
    labeled.cancer = e.labels.front();
    Example ex = encode(labeled, e);
    ex.t = 0.0;
    return ex;
}

/// Nearest-target label for a raw network output; ties go to the lower index.
inline const std::string& decode_label(double y, const Encoder& e) {
    if (e.labels.empty()) fail(errc::single_class, "encoder has no labels");
    if (e.labels.size() == 1) return e.labels.front();
    y = std::clamp(y, 0.0, 1.0);
    const std::size_t c = e.labels.size();
    std::size_t best = 0;
    double best_dist = 2.0;
    for (std::size_t i = 0; i < c; ++i) {
        double target = static_cast<double>(i) / static_cast<double>(c - 1);
        double dist = std::abs(y - target);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return e.labels[best];
}

/// Deterministic shuffled split: the first ceil(n * test_fraction) records of
/// the shuffle become the test set.
inline std::pair<std::vector<Record>, std::vector<Record>>
split(const std::vector<Record>& records, double test_fraction, std::uint64_t seed) {
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng() % i]);

    std::size_t n_test = static_cast<std::size_t>(
        std::ceil(static_cast<double>(records.size()) * test_fraction));
    if (n_test > records.size()) n_test = records.size();

    std::pair<std::vector<Record>, std::vector<Record>> out;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_test ? out.second : out.first).push_back(records[order[i]]);
    return out;
}

} // namespace mutnet
