#pragma once

#include <vector>

#include <cgtrack/costs.hpp>

namespace cgtrack {

struct AssignmentMatch {
    int det = -1;              // row index into the similarity matrix
    int track = -1;            // column index into the similarity matrix
    double similarity = 0.0;
};

struct AssignmentResult {
    std::vector<AssignmentMatch> matches;       // sorted by detection index
    std::vector<int> unmatched_detections;      // ascending
    std::vector<int> unmatched_tracks;          // ascending
};

// Maximizes total similarity over one-to-one assignments (Hungarian method
// on the rectangular matrix, cost = 1 - similarity), then dissolves every
// match whose cost exceeds the gate. Ties between equal-total optima break
// to the lowest detection index, then the lowest track index, so identical
// inputs always produce identical outputs.
AssignmentResult solve(const SimilarityMatrix& m, double gate);

// Max-weight one-to-one assignment over arbitrary non-negative weights.
// Returns row -> col, -1 for unmatched rows; zero-weight pairings may be
// included and are the caller's to filter.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

}  // namespace cgtrack
