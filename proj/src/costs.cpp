#include <cgtrack/costs.hpp>

#include <algorithm>
#include <numeric>

#include <cgtrack/errors.hpp>

namespace cgtrack {

namespace {

void fill_identity_maps(SimilarityMatrix& m, int n_dets, int n_tracks) {
    m.det_index_map.resize(n_dets);
    std::iota(m.det_index_map.begin(), m.det_index_map.end(), 0);
    m.track_index_map.resize(n_tracks);
    std::iota(m.track_index_map.begin(), m.track_index_map.end(), std::int64_t{0});
}

}  // namespace

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ValidationError("cosine_similarity: dimension mismatch (" +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return std::max(0.0, dot);
}

double confidence_of(const Detection& d, ConfidenceSource source) {
    switch (source) {
        case ConfidenceSource::Localization: return d.loc_conf;
        case ConfidenceSource::Classification: return d.cls_conf;
        case ConfidenceSource::Combined: return det_conf(d);
    }
    return d.loc_conf;
}

SimilarityMatrix motion_similarity(const std::vector<Detection>& dets,
                                   const std::vector<BBox>& track_boxes,
                                   ConfidenceSource source) {
    SimilarityMatrix m;
    const int r = static_cast<int>(dets.size());
    const int c = static_cast<int>(track_boxes.size());
    m.values.resize(r, c);
    for (int i = 0; i < r; ++i) {
        const double conf = confidence_of(dets[i], source);
        for (int j = 0; j < c; ++j) {
            m.values(i, j) = iou(dets[i].box, track_boxes[j]) * conf;
        }
    }
    fill_identity_maps(m, r, c);
    return m;
}

SimilarityMatrix cost_c1(const std::vector<Detection>& dets,
                         const std::vector<BBox>& track_boxes) {
    return motion_similarity(dets, track_boxes, ConfidenceSource::Localization);
}

SimilarityMatrix cost_c3(const std::vector<Detection>& dets,
                         const std::vector<std::vector<double>>& track_embeddings) {
    SimilarityMatrix m;
    const int r = static_cast<int>(dets.size());
    const int c = static_cast<int>(track_embeddings.size());
    m.values.resize(r, c);
    for (int i = 0; i < r; ++i) {
        if (!dets[i].embedding.has_value()) {
            throw ValidationError("cost_c3: detection " + std::to_string(i) +
                                  " has no embedding; disable appearance instead");
        }
        const double conf = det_conf(dets[i]);
        for (int j = 0; j < c; ++j) {
            m.values(i, j) = cosine_similarity(*dets[i].embedding, track_embeddings[j]) * conf;
        }
    }
    fill_identity_maps(m, r, c);
    return m;
}

SimilarityMatrix cost_c4(const SimilarityMatrix& c1, const SimilarityMatrix& c3, double alpha) {
    if (c1.values.rows() != c3.values.rows() || c1.values.cols() != c3.values.cols()) {
        throw ValidationError("cost_c4: shape mismatch between the motion and appearance matrices");
    }
    if (c1.det_index_map != c3.det_index_map || c1.track_index_map != c3.track_index_map) {
        throw ValidationError("cost_c4: index maps disagree between the motion and appearance matrices");
    }
    SimilarityMatrix m;
    m.values = alpha * c1.values + (1.0 - alpha) * c3.values;
    m.det_index_map = c1.det_index_map;
    m.track_index_map = c1.track_index_map;
    return m;
}

}  // namespace cgtrack
