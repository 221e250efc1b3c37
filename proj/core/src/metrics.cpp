#include "silex/metrics.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "silex/errors.hpp"

namespace silex {

namespace {

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

Confusion count_confusion(const BinaryMask& pred, const BinaryMask& truth) {
    if (!pred.same_shape(truth)) {
        throw ShapeError("metrics: predicted mask is " + std::to_string(pred.width()) + "x" +
                         std::to_string(pred.height()) + " but truth is " +
                         std::to_string(truth.width()) + "x" + std::to_string(truth.height()));
    }
    Confusion c;
    const std::size_t n = pred.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const bool p = pred.get(i);
        const bool t = truth.get(i);
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

double error_percent(const BinaryMask& pred, const BinaryMask& truth) {
    const Confusion c = count_confusion(pred, truth);
    const double total = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
    return 100.0 * static_cast<double>(c.fp + c.fn) / total;
}

FrameScore score_masks(int frame_index, const BinaryMask& pred, const BinaryMask& truth) {
    const Confusion c = count_confusion(pred, truth);
    FrameScore s;
    s.frame_index = frame_index;
    const double total = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
    s.error_pct = 100.0 * static_cast<double>(c.fp + c.fn) / total;
    s.precision = (c.tp + c.fp == 0) ? 1.0
                                     : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    s.recall = (c.tp + c.fn == 0) ? 1.0
                                  : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    s.f1 = (s.precision + s.recall == 0.0) ? 0.0
                                           : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

ErrorReport evaluate_sequence(std::span<const BinaryMask> preds,
                              std::span<const BinaryMask> truths,
                              int skip, int first_index) {
    if (preds.size() != truths.size()) {
        throw InputDomainError("metrics: " + std::to_string(preds.size()) +
                               " predicted masks vs " + std::to_string(truths.size()) +
                               " truth masks");
    }
    if (skip < 0) throw InputDomainError("metrics: skip must be >= 0");
    if (static_cast<std::size_t>(skip) >= preds.size()) {
        throw InputDomainError("metrics: skip=" + std::to_string(skip) + " leaves no frames out of " +
                               std::to_string(preds.size()));
    }

    ErrorReport r;
    r.skipped = skip;
    double se = 0.0, sp = 0.0, sr = 0.0, sf = 0.0;
    for (std::size_t i = static_cast<std::size_t>(skip); i < preds.size(); ++i) {
        FrameScore s = score_masks(first_index + static_cast<int>(i), preds[i], truths[i]);
        se += s.error_pct;
        sp += s.precision;
        sr += s.recall;
        sf += s.f1;
        r.frames.push_back(s);
    }
    r.frames_evaluated = static_cast<int>(r.frames.size());
    const double n = static_cast<double>(r.frames_evaluated);
    r.mean_error_pct = se / n;
    r.mean_precision = sp / n;
    r.mean_recall = sr / n;
    r.mean_f1 = sf / n;
    return r;
}

std::string report_to_csv(const ErrorReport& report) {
    std::ostringstream out;
    // Comment line keeps the warm-up skip visible in every report.
    out << "# frames_evaluated=" << report.frames_evaluated << " skipped=" << report.skipped
        << " mean_error_pct=" << fmt(report.mean_error_pct) << '\n';
    out << "frame_index,error_pct,precision,recall,f1\n";
    for (const FrameScore& s : report.frames) {
        out << s.frame_index << ',' << fmt(s.error_pct) << ',' << fmt(s.precision) << ','
            << fmt(s.recall) << ',' << fmt(s.f1) << '\n';
    }
    return out.str();
}

std::string report_to_json(const ErrorReport& report) {
    nlohmann::json j;
    j["frames_evaluated"] = report.frames_evaluated;
    j["skipped"] = report.skipped;
    j["mean_error_pct"] = report.mean_error_pct;
    j["mean_precision"] = report.mean_precision;
    j["mean_recall"] = report.mean_recall;
    j["mean_f1"] = report.mean_f1;
    auto& frames = j["frames"] = nlohmann::json::array();
    for (const FrameScore& s : report.frames) {
        frames.push_back({{"frame_index", s.frame_index},
                          {"error_pct", s.error_pct},
                          {"precision", s.precision},
                          {"recall", s.recall},
                          {"f1", s.f1}});
    }
    return j.dump(2) + "\n";
}

} // namespace silex
