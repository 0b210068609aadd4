// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msenti/activations.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "msenti/error.hpp"
#include "msenti/layers.hpp"
#include "msenti/utf8.hpp"

namespace msenti::viz {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

/// Splits one CSV record starting at pos; advances pos past the line break.
std::vector<std::string> read_record(std::string_view csv, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (pos < csv.size()) {
        const char c = csv[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < csv.size() && csv[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < csv.size() && csv[pos + 1] == '\n') {
                ++pos;
            }
            ++pos;
            fields.push_back(std::move(field));
            return fields;
        } else {
            field += c;
        }
        ++pos;
    }
    if (quoted) {
        throw InputError("activation CSV: unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    in >> v;
    if (in.fail() || !in.eof()) {
        throw InputError("activation CSV: '" + s + "' is not a number");
    }
    return v;
}

} // namespace

FeatureMapExport conv_activations(const nn::ModelParams& model, std::string_view text,
                                  const corpus::CharVocab& vocab) {
    if (model.hp.kind != nn::ArchitectureKind::subword) {
        throw InputError("model has no convolution layer");
    }
    const auto encoded = corpus::encode_sentence(text, vocab, model.hp.max_len);
    const std::size_t m = model.hp.kernel_width;
    if (encoded.true_length < m) {
        throw InputError("text of " + std::to_string(encoded.true_length) +
                         " characters is shorter than the filter width " + std::to_string(m));
    }
    // The full padded map is computed with the same kernel the forward pass
    // uses; windows that touch padding are then cut away.
    const nn::Tensor q = nn::embed(encoded.indices, model.embedding);
    const nn::Tensor full = nn::conv1d_relu(q, model.conv_weight, model.conv_bias);

    FeatureMapExport out;
    out.text = std::string(text);
    out.window_span = m;
    const auto cps = utf8::decode(text);
    for (std::size_t i = 0; i < encoded.true_length; ++i) {
        out.characters.push_back(utf8::encode(cps[i]));
    }
    const std::size_t filters = full.dim(0);
    const std::size_t width = encoded.true_length - m + 1;
    out.responses = nn::Tensor({filters, width});
    out.top_windows.resize(filters);
    for (std::size_t k = 0; k < filters; ++k) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < width; ++i) {
            out.responses(k, i) = full(k, i);
            if (full(k, i) > full(k, best)) {
                best = i;
            }
        }
        out.top_windows[k] = best;
    }
    return out;
}

std::string activation_csv(const FeatureMapExport& exported) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17);
    const std::size_t filters = exported.responses.empty() ? 0 : exported.responses.dim(0);
    out << "char_pos,char";
    for (std::size_t k = 0; k < filters; ++k) {
        out << ",filter_" << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < exported.width(); ++i) {
        out << i << ',' << csv_field(exported.characters.at(i));
        for (std::size_t k = 0; k < filters; ++k) {
            out << ',' << exported.responses(k, i);
        }
        out << '\n';
    }
    return out.str();
}

void export_activation_csv(const FeatureMapExport& exported, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write activation CSV '" + path.string() + "'");
    }
    out << activation_csv(exported);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

ActivationTable parse_activation_csv(std::string_view csv) {
    std::size_t pos = 0;
    const auto header = read_record(csv, pos);
    if (header.size() < 2 || header[0] != "char_pos" || header[1] != "char") {
        throw InputError("activation CSV: unexpected header");
    }
    const std::size_t filters = header.size() - 2;
    ActivationTable table;
    std::vector<std::vector<double>> rows;
    while (pos < csv.size()) {
        const auto rec = read_record(csv, pos);
        if (rec.size() == 1 && rec[0].empty()) {
            continue;
        }
        if (rec.size() != header.size()) {
            throw InputError("activation CSV: row " + std::to_string(rows.size() + 1) +
                             " has " + std::to_string(rec.size()) + " fields");
        }
        std::size_t p = 0;
        const auto [ptr, ec] = std::from_chars(rec[0].data(), rec[0].data() + rec[0].size(), p);
        if (ec != std::errc() || ptr != rec[0].data() + rec[0].size()) {
            throw InputError("activation CSV: bad char_pos '" + rec[0] + "'");
        }
        table.positions.push_back(p);
        table.characters.push_back(rec[1]);
        std::vector<double> values;
        for (std::size_t k = 0; k < filters; ++k) {
            values.push_back(parse_double(rec[k + 2]));
        }
        rows.push_back(std::move(values));
    }
    table.responses = nn::Tensor({filters, rows.size()});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < filters; ++k) {
            table.responses(k, i) = rows[i][k];
        }
    }
    return table;
}

ActivationTable import_activation_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open activation CSV '" + path.string() + "'");
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_activation_csv(text);
}

} // namespace msenti::viz
