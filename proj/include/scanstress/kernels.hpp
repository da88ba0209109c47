#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "scanstress/frame.hpp"
#include "scanstress/params.hpp"

namespace scanstress {

// Worker-count bound for the OpenMP kernels. 0 means the runtime default.
// Thread count never changes outputs: all randomness is keyed per point.
struct Exec {
  int threads = 0;
};

// Azimuth theta = atan2(y, x) in (-pi, pi], elevation phi = asin(z / ||p||)
// in [-pi/2, pi/2]. The asin argument is clamped to [-1, 1] to absorb
// rounding in ||p||. Throws Error on a zero-norm point; callers that meet
// such points drop them instead.
std::pair<double, double> spherical_coords(const Eigen::Vector3d& p);

// Bernoulli dropout: point i retained with probability 1 - ratio.
PointCloudFrame apply_dropout(const PointCloudFrame& frame, double ratio, std::uint64_t seed,
                              const Exec& exec = {});

// Removes points whose azimuth lies in the wrapped half-open sector
// [start, start + extent). Deterministic.
PointCloudFrame apply_structured_dropout(const PointCloudFrame& frame, const SectorParams& sector,
                                         const Exec& exec = {});

// Keeps exactly the points with |theta| <= theta_max and |phi| <= phi_max.
// Zero-norm points have no defined direction and are removed.
PointCloudFrame apply_fov_reduction(const PointCloudFrame& frame, double theta_max, double phi_max,
                                    const Exec& exec = {});

// The K occlusion centers for a given seed: direction from a normalized
// 3D Gaussian (uniform on the sphere), radius uniform on
// [center_min, center_max].
std::vector<Eigen::Vector3d> sample_occlusion_centers(const OcclusionParams& params,
                                                      std::uint64_t seed);

// Retains exactly the points with ||p - c|| > radius for every center.
// Exposed separately so tests can inject known centers.
PointCloudFrame apply_occlusion_at(const PointCloudFrame& frame,
                                   std::span<const Eigen::Vector3d> centers, double radius,
                                   const Exec& exec = {});

PointCloudFrame apply_occlusion(const PointCloudFrame& frame, const OcclusionParams& params,
                                std::uint64_t seed, const Exec& exec = {});

// p' = p + eps (+ eta with probability outlier_prob), eps ~ N(0, sigma^2 I),
// eta ~ N(0, outlier_sigma^2 I). Count, order, offsets, attributes unchanged.
PointCloudFrame apply_noise(const PointCloudFrame& frame, const NoiseParams& params,
                            std::uint64_t seed, const Exec& exec = {});

// Rotation about axis aa/||aa|| by angle ||aa||. Below 0.1 rad the
// first-order form I + [aa]x is used; otherwise exact Rodrigues.
Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d& axis_angle);

inline constexpr double kSmallAngleThreshold = 0.1;  // rad

// p'_i = R(w * dt_i) p_i + v * dt_i with dt_i the point's time offset.
PointCloudFrame apply_motion_distortion(const PointCloudFrame& frame, const MotionEstimate& motion,
                                        const Exec& exec = {});

// Keeps indices {0, stride, 2*stride, ...}; output count = ceil(N/stride).
PointCloudFrame apply_sparsification(const PointCloudFrame& frame, int stride,
                                     const Exec& exec = {});

}  // namespace scanstress
