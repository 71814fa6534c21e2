#pragma once

#include <Eigen/Dense>

#include <cgtrack/geometry.hpp>

namespace cgtrack {

// Constant-velocity filter over (cx, cy, w, h) and their per-frame
// velocities. All noise magnitudes scale with the box height.
struct KalmanState {
    Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();
};

struct KalmanParams {
    double std_pos = 1.0 / 20.0;    // process/measurement std per unit height
    double std_vel = 1.0 / 160.0;   // velocity process std per unit height
    double init_pos_factor = 2.0;   // initial position/size uncertainty multiplier
    double init_vel_factor = 10.0;  // initial velocity uncertainty multiplier
};

// Center-form state from a box, with zero velocity. Throws ValidationError
// on a zero-area box: the uncertainty scales with height, so a degenerate
// box cannot seed a usable state.
KalmanState initiate(const BBox& box, const KalmanParams& p = {});

KalmanState predict(const KalmanState& s, const KalmanParams& p = {});

KalmanState update(const KalmanState& s, const BBox& measurement, const KalmanParams& p = {});

// Inverse of the center-form conversion; negative sizes clamp to 0.
BBox state_to_box(const KalmanState& s);

}  // namespace cgtrack
