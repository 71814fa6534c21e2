#include <cgtrack/assignment.hpp>

#include <algorithm>
#include <limits>

namespace cgtrack {

namespace {

// Kuhn-Munkres with potentials on a square cost matrix, O(n^3).
// Returns row -> column of a minimum-cost perfect matching.
std::vector<int> hungarian_square(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j]) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

// Canonicalizes equal-total optima: whenever swapping the columns of two
// rows leaves the summed cost bit-identical, give the lower row the lower
// column. Each swap strictly decreases sum(i * col(i)), so this terminates.
void canonicalize(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col) {
    const int n = static_cast<int>(row_to_col.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i1 = 0; i1 < n; ++i1) {
            for (int i2 = i1 + 1; i2 < n; ++i2) {
                const int j1 = row_to_col[i1];
                const int j2 = row_to_col[i2];
                if (j2 < j1 &&
                    cost(i1, j1) + cost(i2, j2) == cost(i1, j2) + cost(i2, j1)) {
                    std::swap(row_to_col[i1], row_to_col[i2]);
                    changed = true;
                }
            }
        }
    }
}

}  // namespace

AssignmentResult solve(const SimilarityMatrix& m, double gate) {
    AssignmentResult out;
    const int r = m.rows();
    const int c = m.cols();
    if (r == 0 || c == 0) {
        out.unmatched_detections.resize(r);
        for (int i = 0; i < r; ++i) out.unmatched_detections[i] = i;
        out.unmatched_tracks.resize(c);
        for (int j = 0; j < c; ++j) out.unmatched_tracks[j] = j;
        return out;
    }

    // Pad to square. Padding cells cost 1.0 (similarity 0), which can never
    // displace a positive-similarity match; ties against real zero-similarity
    // cells resolve toward the real columns during canonicalization.
    const int n = std::max(r, c);
    Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, 1.0);
    cost.topLeftCorner(r, c) = (1.0 - m.values.array()).matrix();

    std::vector<int> row_to_col = hungarian_square(cost);
    canonicalize(cost, row_to_col);

    std::vector<char> track_matched(c, 0);
    for (int i = 0; i < r; ++i) {
        const int j = row_to_col[i];
        if (j >= c) {
            out.unmatched_detections.push_back(i);
            continue;
        }
        const double sim = m.values(i, j);
        if (1.0 - sim > gate) {
            out.unmatched_detections.push_back(i);
            continue;
        }
        out.matches.push_back({i, j, sim});
        track_matched[j] = 1;
    }
    for (int j = 0; j < c; ++j) {
        if (!track_matched[j]) out.unmatched_tracks.push_back(j);
    }
    return out;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
    const int r = static_cast<int>(weights.rows());
    const int c = static_cast<int>(weights.cols());
    std::vector<int> row_to_col(r, -1);
    if (r == 0 || c == 0) {
        return row_to_col;
    }
    const double wmax = weights.maxCoeff();
    const int n = std::max(r, c);
    Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, wmax);
    cost.topLeftCorner(r, c) = (wmax - weights.array()).matrix();
    std::vector<int> sol = hungarian_square(cost);
    canonicalize(cost, sol);
    for (int i = 0; i < r; ++i) {
        if (sol[i] < c) row_to_col[i] = sol[i];
    }
    return row_to_col;
}

}  // namespace cgtrack
