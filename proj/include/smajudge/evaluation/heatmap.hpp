// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_EVALUATION_HEATMAP_HPP
#define SMAJUDGE_EVALUATION_HEATMAP_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smajudge/corpus/document.hpp"
#include "smajudge/training/data.hpp"
#include "smajudge/training/predict.hpp"

namespace smajudge {

struct AttentionHeatmap {
    std::string case_id;
    Tokens tokens;                  // appellate fact tokens, as encoded
    std::vector<double> weights;    // alpha
    std::vector<double> intensity;  // alpha / max alpha
    Tokens grounds;
    int predicted_ruling = 0;
    double probability = 0;
    std::optional<int> true_ruling;
};

inline AttentionHeatmap make_heatmap(const AppealPrediction& prediction, const AppealDocument& doc, std::size_t max_seq_len) {
    AttentionHeatmap h;
    h.case_id = doc.case_id;
    h.tokens = appellate_fact_tokens(doc, max_seq_len);
    if (prediction.alpha.size() != h.tokens.size()) {
        throw ShapeError("heatmap: " + std::to_string(prediction.alpha.size()) + " attention weights for " +
                         std::to_string(h.tokens.size()) + " tokens");
    }
    h.weights = prediction.alpha;
    const double peak = h.weights.empty() ? 0.0 : *std::max_element(h.weights.begin(), h.weights.end());
    for (double w : h.weights) h.intensity.push_back(peak > 0 ? w / peak : 0.0);
    h.grounds = doc.grounds;
    h.predicted_ruling = prediction.ruling;
    h.probability = prediction.probability;
    if (doc.appeal_judgment) h.true_ruling = doc.appeal_judgment->ruling;
    return h;
}

namespace detail {

inline std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* ruling_text(int r) { return r == 0 ? "affirmed (0)" : "not affirmed (1)"; }

}  // namespace detail

inline std::string render_heatmap_html(const AttentionHeatmap& h) {
    std::ostringstream os;
    os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << detail::html_escape(h.case_id) << "</title>\n"
       << "<style>body{font-family:sans-serif;max-width:60em;margin:2em auto}"
       << "span.t{padding:1px 3px;margin:1px;display:inline-block;border-radius:3px}</style></head><body>\n"
       << "<h1>" << detail::html_escape(h.case_id) << "</h1>\n";
    os << "<p><b>Grounds of appeal:</b> " << detail::html_escape(join_tokens(h.grounds)) << "</p>\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", h.probability);
    os << "<p><b>Predicted ruling:</b> " << detail::ruling_text(h.predicted_ruling) << ", p = " << buf << "</p>\n";
    if (h.true_ruling) os << "<p><b>True ruling:</b> " << detail::ruling_text(*h.true_ruling) << "</p>\n";
    os << "<p>\n";
    for (std::size_t i = 0; i < h.tokens.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.4f", h.intensity[i]);
        char alpha[32];
        std::snprintf(alpha, sizeof alpha, "%.6f", h.weights[i]);
        os << "<span class=\"t\" style=\"background:rgba(200,30,30," << buf << ")\" title=\"alpha=" << alpha << "\">"
           << detail::html_escape(h.tokens[i]) << "</span>\n";
    }
    os << "</p>\n</body></html>\n";
    return os.str();
}

inline std::string render_heatmap_text(const AttentionHeatmap& h) {
    std::ostringstream os;
    os << "case " << h.case_id << '\n';
    os << "grounds " << join_tokens(h.grounds) << '\n';
    char buf[96];
    std::snprintf(buf, sizeof buf, "predicted %d p=%.4f", h.predicted_ruling, h.probability);
    os << buf;
    if (h.true_ruling) os << " truth " << *h.true_ruling;
    os << '\n';
    for (std::size_t i = 0; i < h.tokens.size(); ++i) {
        const auto bars = static_cast<std::size_t>(std::lround(h.intensity[i] * 20));
        std::snprintf(buf, sizeof buf, "%.6f %.4f ", h.weights[i], h.intensity[i]);
        os << buf << std::string(bars, '#') << std::string(20 - bars, '.') << ' ' << h.tokens[i] << '\n';
    }
    return os.str();
}

/// Case id with every character outside [A-Za-z0-9._-] replaced by '_'.
inline std::string heatmap_file_stem(const std::string& case_id) {
    std::string s = case_id;
    for (char& c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) c = '_';
    }
    if (s.empty() || s == "." || s == "..") s = "case";
    return s;
}

/// Writes <dir>/<case>.html and <dir>/<case>.txt and returns the HTML path.
inline std::filesystem::path write_heatmap(const AttentionHeatmap& h, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string stem = heatmap_file_stem(h.case_id);
    const auto html = dir / (stem + ".html");
    std::ofstream(html) << render_heatmap_html(h);
    std::ofstream(dir / (stem + ".txt")) << render_heatmap_text(h);
    return html;
}

}  // namespace smajudge

#endif  // SMAJUDGE_EVALUATION_HEATMAP_HPP
