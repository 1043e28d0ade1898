#pragma once

// X3D Transform fields and their decomposition into the two nested
// translation/rotation/scale nodes a scene-node hierarchy can store.
// A Transform with center c, rotation R, scale S and scaleOrientation SR
// applies M = T(t)·T(c)·R·SR·S·SR⁻¹·T(−c); scaleOrientation survives the
// decomposition only when it permutes coordinate axes (OGRE nodes cannot
// shear) or when the scale is uniform.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "x3db/diagnostics.hpp"
#include "x3db/x3d.hpp"

namespace x3db {

/// X3D SFRotation. A zero axis with zero angle is the identity normal form.
struct AxisAngle {
    Eigen::Vector3d axis{0, 0, 1};
    double angle = 0;
};

struct TransformParams {
    Eigen::Vector3d translation{0, 0, 0};
    Eigen::Vector3d center{0, 0, 0};
    AxisAngle rotation;
    Eigen::Vector3d scale{1, 1, 1};
    AxisAngle scale_orientation;
};

struct TrsNode {
    Eigen::Vector3d translation{0, 0, 0};
    Eigen::Quaterniond orientation{1, 0, 0, 0};
    Eigen::Vector3d scale{1, 1, 1};

    Eigen::Matrix4d matrix() const; // T·R·S
};

struct TrsNodePair {
    TrsNode outer;
    TrsNode inner;
};

Eigen::Quaterniond quat_from_axis_angle(const AxisAngle& aa);

/// Canonical sign: nonnegative w, for deterministic serialization.
Eigen::Quaterniond canonical_quat(Eigen::Quaterniond q);

/// The X3D transform matrix; serves as the oracle the decomposition is
/// checked against.
Eigen::Matrix4d compose_matrix(const TransformParams& p);

/// Splits into outer (translation+center, rotation) and inner (−S′·center,
/// axis-permuted scale S′ = SR·diag(scale)·SR⁻¹) nodes. Errors with
/// `shear-not-representable` when scaleOrientation is not a 90°-multiple
/// rotation and the scale is non-uniform.
Result<TrsNodePair> decompose_transform(const TransformParams& p);

/// Reads translation/center/rotation/scale/scaleOrientation off a Transform
/// node, applying X3D defaults; malformed fields are diagnosed as
/// `bad-field`.
TransformParams transform_params_from_node(const X3dNode& node, DiagnosticList* diags = nullptr);

} // namespace x3db
