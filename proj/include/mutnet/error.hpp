#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mutnet {

// Failure categories surfaced by the library. The CLI maps these onto its
// exit-code contract (input parse vs model vs unknown-category errors).
enum class errc {
    // sequence and tabular input
    empty_input,
    illegal_character,
    missing_header,
    too_short,
    bad_codon,
    kind_mismatch,
    empty_sequence,
    out_of_range,
    same_base,
    missing_column,
    bad_integer,
    empty_file,
    single_class,
    empty_records,
    malformed,
    // feature encoding
    unknown_category,
    unknown_label,
    // network and model files
    zero_dimension,
    dimension_mismatch,
    empty_dataset,
    bad_magic,
    version_unsupported,
    truncated_file,
    write_failed,
};

class error : public std::runtime_error {
public:
    error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

} // namespace mutnet
