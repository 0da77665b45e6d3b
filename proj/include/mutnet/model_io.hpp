#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mutnet/dataset.hpp"
#include "mutnet/error.hpp"
#include "mutnet/network.hpp"

namespace mutnet {

struct Model {
    Network net;
    Encoder encoder;
};

inline constexpr int kModelFormatVersion = 1;

/// Serialize network weights plus the fitted encoder as versioned JSON.
/// Doubles are written in their shortest round-trip form, so save/load is
/// bit-exact and the output is canonical for identical inputs.
inline std::string save_model(const Network& net, const Encoder& encoder) {
    nlohmann::ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["topology"] = {net.n_in, net.n_hidden, net.n_out};
    j["activation"] = "sigmoid";
    j["v"] = net.v;
    j["v0"] = net.v0;
    j["w"] = net.w;
    j["w0"] = net.w0;

    nlohmann::ordered_json enc;
    enc["position_min"] = encoder.position_min;
    enc["position_max"] = encoder.position_max;
    nlohmann::ordered_json fields;
    for (std::size_t i = 0; i < kNumCategorical; ++i)
        fields[kColumnNames[i + 1]] = encoder.vocabs[i];
    enc["fields"] = std::move(fields);
    enc["labels"] = encoder.labels;
    j["encoder"] = std::move(enc);

    return j.dump(2) + "\n";
}

inline Model load_model(const std::string& text) {
    if (text.empty()) fail(errc::truncated_file, "model file is empty");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::string what = e.what();
        if (what.find("unexpected end of input") != std::string::npos)
            fail(errc::truncated_file, "model file is truncated: " + what);
        fail(errc::bad_magic, "model file is not valid JSON: " + what);
    }
    if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_number_integer())
        fail(errc::bad_magic, "not a model file (missing format_version)");
    if (j["format_version"].get<int>() != kModelFormatVersion)
        fail(errc::version_unsupported,
             "model format_version " + j["format_version"].dump() + " is not supported");

    Model m;
    try {
        auto topo = j.at("topology");
        if (!topo.is_array() || topo.size() != 3)
            fail(errc::dimension_mismatch, "topology must be [n_in, n_hidden, n_out]");
        m.net.n_in = topo[0].get<std::size_t>();
        m.net.n_hidden = topo[1].get<std::size_t>();
        m.net.n_out = topo[2].get<std::size_t>();
        if (m.net.n_in == 0 || m.net.n_hidden == 0 || m.net.n_out == 0)
            fail(errc::zero_dimension, "model topology has an empty layer");
        m.net.v = j.at("v").get<std::vector<double>>();
        m.net.v0 = j.at("v0").get<std::vector<double>>();
        m.net.w = j.at("w").get<std::vector<double>>();
        m.net.w0 = j.at("w0").get<std::vector<double>>();

        const auto& enc = j.at("encoder");
        m.encoder.position_min = enc.at("position_min").get<int>();
        m.encoder.position_max = enc.at("position_max").get<int>();
        const auto& fields = enc.at("fields");
        for (std::size_t i = 0; i < kNumCategorical; ++i)
            m.encoder.vocabs[i] = fields.at(kColumnNames[i + 1]).get<std::vector<std::string>>();
        m.encoder.labels = enc.at("labels").get<std::vector<std::string>>();
    } catch (const error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::bad_magic, std::string("model file is malformed: ") + e.what());
    }

    if (m.net.v.size() != m.net.n_in * m.net.n_hidden ||
        m.net.v0.size() != m.net.n_hidden ||
        m.net.w.size() != m.net.n_hidden * m.net.n_out ||
        m.net.w0.size() != m.net.n_out)
        fail(errc::dimension_mismatch, "weight array sizes do not match the topology");
    if (m.encoder.labels.empty())
        fail(errc::bad_magic, "model encoder has no labels");
    return m;
}

inline Model load_model(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str());
}

} // namespace mutnet
