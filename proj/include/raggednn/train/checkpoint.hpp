// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "raggednn/matrix.hpp"
#include "raggednn/nn/model.hpp"
#include "raggednn/train/optimizer.hpp"

namespace raggednn {

namespace detail {

inline const char* base64_alphabet() {
    return "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

inline std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    const char* alphabet = base64_alphabet();
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = static_cast<std::uint32_t>(bytes[i]) << 16;
        if (i + 1 < bytes.size()) chunk |= static_cast<std::uint32_t>(bytes[i + 1]) << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(alphabet[(chunk >> 18) & 63]);
        out.push_back(alphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? alphabet[chunk & 63] : '=');
    }
    return out;
}

inline std::vector<std::uint8_t> base64_decode(const std::string& text) {
    std::array<int, 256> lookup;
    lookup.fill(-1);
    const char* alphabet = base64_alphabet();
    for (int i = 0; i < 64; ++i) lookup[static_cast<unsigned char>(alphabet[i])] = i;
    if (text.size() % 4 != 0) throw IoError("base64: length not a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        std::uint32_t chunk = 0;
        int pad = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            chunk <<= 6;
            const char c = text[i + k];
            if (c == '=') {
                ++pad;
            } else {
                const int v = lookup[static_cast<unsigned char>(c)];
                if (v < 0) throw IoError("base64: invalid character");
                chunk |= static_cast<std::uint32_t>(v);
            }
        }
        out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(chunk & 0xff));
    }
    return out;
}

/// Little-endian IEEE-754 byte image of a matrix; bit-exact both ways.
inline std::string encode_matrix(const Matrix& m) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(static_cast<std::size_t>(m.size()) * 8);
    for (Index i = 0; i < m.size(); ++i) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(double));
        std::memcpy(&bits, &m.data()[i], 8);
        for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
    return base64_encode(bytes);
}

inline Matrix decode_matrix(const std::string& text, Index rows, Index cols) {
    std::vector<std::uint8_t> bytes = base64_decode(text);
    if (static_cast<Index>(bytes.size()) != rows * cols * 8)
        throw IoError("checkpoint: array payload size mismatch");
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(i * 8 + b)]) << (8 * b);
        std::memcpy(&m.data()[i], &bits, 8);
    }
    return m;
}

inline nlohmann::json named_arrays_to_json(const std::vector<std::pair<std::string, Matrix>>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [name, m] : v)
        arr.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()},
                       {"data", encode_matrix(m)}});
    return arr;
}

inline std::vector<std::pair<std::string, Matrix>> named_arrays_from_json(
    const nlohmann::json& arr) {
    std::vector<std::pair<std::string, Matrix>> out;
    for (const auto& item : arr)
        out.emplace_back(item.at("name").get<std::string>(),
                         decode_matrix(item.at("data").get<std::string>(),
                                       item.at("rows").get<Index>(), item.at("cols").get<Index>()));
    return out;
}

} // namespace detail

/// Versioned snapshot of a trained model: spec, parameters, optimizer
/// moments, and RNG state. JSON header with base64 little-endian double
/// payloads; reload reproduces bit-identical forward passes.
struct Checkpoint {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    ModelSpec model_spec;
    std::vector<std::pair<std::string, Matrix>> params;
    OptimizerConfig opt_config;
    std::int64_t opt_step = 0;
    std::vector<std::pair<std::string, Matrix>> opt_first_moment;
    std::vector<std::pair<std::string, Matrix>> opt_second_moment;
    std::string rng_state;
    std::vector<std::string> target_names;  // evaluation metric naming
};

inline void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    nlohmann::json j;
    j["format_version"] = ckpt.format_version;
    j["model_spec"] = model_spec_to_json(ckpt.model_spec);
    j["params"] = detail::named_arrays_to_json(ckpt.params);
    j["optimizer"] = {{"kind", ckpt.opt_config.kind},
                      {"lr", ckpt.opt_config.lr},
                      {"beta1", ckpt.opt_config.beta1},
                      {"beta2", ckpt.opt_config.beta2},
                      {"epsilon", ckpt.opt_config.epsilon},
                      {"t", ckpt.opt_step},
                      {"m", detail::named_arrays_to_json(ckpt.opt_first_moment)},
                      {"v", detail::named_arrays_to_json(ckpt.opt_second_moment)}};
    j["rng"] = ckpt.rng_state;
    j["target_names"] = ckpt.target_names;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint '" + path + "'");
    out << j.dump() << "\n";
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::exception&) {
        throw IoError("unexpected end of checkpoint '" + path + "'");
    }
    Checkpoint ckpt;
    try {
        ckpt.format_version = j.at("format_version").get<int>();
        if (ckpt.format_version != Checkpoint::kFormatVersion)
            throw IoError("checkpoint format version " + std::to_string(ckpt.format_version) +
                          " not supported (supported: " +
                          std::to_string(Checkpoint::kFormatVersion) + ")");
        ckpt.model_spec = model_spec_from_json(j.at("model_spec"));
        ckpt.params = detail::named_arrays_from_json(j.at("params"));
        const auto& opt = j.at("optimizer");
        ckpt.opt_config.kind = opt.at("kind").get<std::string>();
        ckpt.opt_config.lr = opt.at("lr").get<double>();
        ckpt.opt_config.beta1 = opt.at("beta1").get<double>();
        ckpt.opt_config.beta2 = opt.at("beta2").get<double>();
        ckpt.opt_config.epsilon = opt.at("epsilon").get<double>();
        ckpt.opt_step = opt.at("t").get<std::int64_t>();
        ckpt.opt_first_moment = detail::named_arrays_from_json(opt.at("m"));
        ckpt.opt_second_moment = detail::named_arrays_from_json(opt.at("v"));
        ckpt.rng_state = j.at("rng").get<std::string>();
        ckpt.target_names = j.at("target_names").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt checkpoint '" + path + "': " + e.what());
    }
    return ckpt;
}

/// Restore parameter values (and optionally moments) into a freshly
/// built model's parameter set; names and shapes must line up.
inline void restore_params(const std::vector<std::pair<std::string, Matrix>>& stored,
                           const std::vector<ParamRef>& params) {
    if (stored.size() != params.size())
        throw IoError("checkpoint: parameter count " + std::to_string(stored.size()) +
                      " != model's " + std::to_string(params.size()));
    for (std::size_t i = 0; i < stored.size(); ++i) {
        if (stored[i].first != params[i].name)
            throw IoError("checkpoint: parameter '" + stored[i].first + "' does not match '" +
                          params[i].name + "'");
        if (!stored[i].second.same_shape(params[i].var->value))
            throw IoError("checkpoint: shape mismatch for parameter '" + stored[i].first + "'");
        params[i].var->value = stored[i].second;
        params[i].var->zero_grad();
    }
}

} // namespace raggednn
