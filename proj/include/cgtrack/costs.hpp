#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include <cgtrack/detection.hpp>

namespace cgtrack {

// Detections-by-tracks similarity matrix. Entries live in [0, 1], higher is
// better. The index maps carry the caller's identifiers for each row and
// column so cascade levels can work on subsets without losing addressing.
struct SimilarityMatrix {
    Eigen::MatrixXd values;                 // rows: detections, cols: tracks
    std::vector<int> det_index_map;         // row -> caller detection index
    std::vector<std::int64_t> track_index_map;  // col -> caller track id

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

// Clamped cosine: max(0, a.b) for unit vectors. Negative cosines carry no
// identity evidence for re-id embeddings, and clamping keeps every matrix
// entry in [0, 1]. Throws ValidationError on dimension mismatch.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Which confidence channel multiplies the IoU in the motion matrix.
enum class ConfidenceSource { Localization, Classification, Combined };

double confidence_of(const Detection& d, ConfidenceSource source);

// IoU(detection, track box) weighted by the chosen confidence of the
// detection. Among detections with near-equal IoU to one track, the weight
// favors the better-localized box.
SimilarityMatrix motion_similarity(const std::vector<Detection>& dets,
                                   const std::vector<BBox>& track_boxes,
                                   ConfidenceSource source = ConfidenceSource::Localization);

// Motion matrix with the localization confidence weight.
SimilarityMatrix cost_c1(const std::vector<Detection>& dets,
                         const std::vector<BBox>& track_boxes);

// Appearance matrix: cosine similarity weighted by the combined detection
// confidence, since a poorly localized box crops a poor feature. Every
// detection must carry an embedding; with embeddings absent, run with
// appearance off instead.
SimilarityMatrix cost_c3(const std::vector<Detection>& dets,
                         const std::vector<std::vector<double>>& track_embeddings);

// Convex blend alpha*C1 + (1-alpha)*C3. Shapes and index maps must agree.
SimilarityMatrix cost_c4(const SimilarityMatrix& c1, const SimilarityMatrix& c3, double alpha);

}  // namespace cgtrack
