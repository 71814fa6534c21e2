#include <cgtrack/kalman.hpp>

#include <algorithm>
#include <limits>

#include <cgtrack/errors.hpp>

namespace cgtrack {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat48 = Eigen::Matrix<double, 4, 8>;

Mat8 transition_matrix() {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) {
        f(i, i + 4) = 1.0;
    }
    return f;
}

Mat48 measurement_matrix() {
    Mat48 h = Mat48::Zero();
    for (int i = 0; i < 4; ++i) {
        h(i, i) = 1.0;
    }
    return h;
}

// Center coordinate whose inverse conversion recovers `lo` exactly.
// lo + extent/2 can round such that subtracting extent/2 lands one ulp off;
// a one-ulp nudge repairs that whenever an exact preimage exists.
double exact_center(double lo, double extent) {
    const double half = 0.5 * extent;
    double c = lo + half;
    if (c - half == lo) {
        return c;
    }
    const double inf = std::numeric_limits<double>::infinity();
    double up = c, down = c;
    for (int k = 0; k < 2; ++k) {
        up = std::nextafter(up, inf);
        if (up - half == lo) return up;
        down = std::nextafter(down, -inf);
        if (down - half == lo) return down;
    }
    return c;
}

void clamp_size(Vec8& mean) {
    mean(2) = std::max(mean(2), 0.0);
    mean(3) = std::max(mean(3), 0.0);
}

void symmetrize(Mat8& m) {
    m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace

KalmanState initiate(const BBox& box, const KalmanParams& p) {
    if (!box.valid() || box.area() <= 0.0) {
        throw ValidationError("kalman initiate requires a box with positive area");
    }
    KalmanState s;
    s.mean << exact_center(box.left, box.width), exact_center(box.top, box.height),
        box.width, box.height, 0.0, 0.0, 0.0, 0.0;
    const double h = box.height;
    Vec8 std;
    const double sp = p.init_pos_factor * p.std_pos * h;
    const double sv = p.init_vel_factor * p.std_vel * h;
    std << sp, sp, sp, sp, sv, sv, sv, sv;
    s.covariance = std.array().square().matrix().asDiagonal();
    return s;
}

KalmanState predict(const KalmanState& s, const KalmanParams& p) {
    static const Mat8 f = transition_matrix();
    const double h = std::max(s.mean(3), 0.0);
    Vec8 std;
    const double sp = p.std_pos * h;
    const double sv = p.std_vel * h;
    std << sp, sp, sp, sp, sv, sv, sv, sv;
    const Mat8 q = std.array().square().matrix().asDiagonal();

    KalmanState out;
    out.mean = f * s.mean;
    clamp_size(out.mean);
    out.covariance = f * s.covariance * f.transpose() + q;
    symmetrize(out.covariance);
    return out;
}

KalmanState update(const KalmanState& s, const BBox& measurement, const KalmanParams& p) {
    if (!measurement.valid()) {
        throw ValidationError("kalman update requires a valid measurement box");
    }
    static const Mat48 hm = measurement_matrix();
    const double h = std::max(s.mean(3), 0.0);
    Vec4 std;
    const double sp = p.std_pos * h;
    std << sp, sp, sp, sp;
    const Mat4 r = std.array().square().matrix().asDiagonal();

    Vec4 z;
    z << measurement.center_x(), measurement.center_y(), measurement.width, measurement.height;

    const Mat4 innovation_cov = hm * s.covariance * hm.transpose() + r;
    const Eigen::Matrix<double, 8, 4> gain =
        innovation_cov.ldlt().solve(hm * s.covariance).transpose();
    const Vec4 innovation = z - hm * s.mean;

    KalmanState out;
    out.mean = s.mean + gain * innovation;
    clamp_size(out.mean);
    // Joseph form keeps the covariance positive semidefinite under roundoff.
    const Mat8 ikh = Mat8::Identity() - gain * hm;
    out.covariance = ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
    symmetrize(out.covariance);
    return out;
}

BBox state_to_box(const KalmanState& s) {
    BBox b;
    b.width = std::max(s.mean(2), 0.0);
    b.height = std::max(s.mean(3), 0.0);
    b.left = s.mean(0) - 0.5 * b.width;
    b.top = s.mean(1) - 0.5 * b.height;
    return b;
}

}  // namespace cgtrack
