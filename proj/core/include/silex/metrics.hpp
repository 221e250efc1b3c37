#pragma once

// Pixelwise evaluation of predicted masks against ground truth: error
// percentage (misclassification rate) plus foreground precision/recall/F1,
// per frame and averaged over a sequence.

#include <span>
#include <string>
#include <vector>

#include "silex/image.hpp"

namespace silex {

struct FrameScore {
    int frame_index = 0;
    double error_pct = 0.0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

struct ErrorReport {
    std::vector<FrameScore> frames; // evaluated frames, in order
    int frames_evaluated = 0;
    int skipped = 0;                // warm-up pairs excluded up front
    double mean_error_pct = 0.0;
    double mean_precision = 1.0;
    double mean_recall = 1.0;
    double mean_f1 = 1.0;
};

// 100 * |{p : pred[p] != truth[p]}| / (W*H). Throws ShapeError on mismatch.
double error_percent(const BinaryMask& pred, const BinaryMask& truth);

// Full confusion-matrix scoring of one pair. Precision and recall use the
// foreground class with 0/0 defined as 1 (an empty frame predicted empty is
// a perfect frame); F1 of p = r = 0 is 0.
FrameScore score_masks(int frame_index, const BinaryMask& pred, const BinaryMask& truth);

// Scores aligned sequences after dropping the first `skip` pairs.
// frame_index of pair i is first_index + i. Throws InputDomainError on
// length mismatch or when skip leaves nothing to evaluate.
ErrorReport evaluate_sequence(std::span<const BinaryMask> preds,
                              std::span<const BinaryMask> truths,
                              int skip = 0, int first_index = 0);

// CSV rows frame_index,error_pct,precision,recall,f1 with a header line.
std::string report_to_csv(const ErrorReport& report);
// Same content as JSON: summary fields plus a "frames" array.
std::string report_to_json(const ErrorReport& report);

} // namespace silex
