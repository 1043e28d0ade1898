#pragma once

// Maps X3D timing/interpolator nodes onto controller-function and animation
// track descriptions: TimeSensor becomes an accumulating controller,
// ScalarInterpolator a linear controller function, CoordinateInterpolator a
// vertex animation track and Position/OrientationInterpolator node animation
// tracks.

#include <span>
#include <string>
#include <vector>

#include "x3db/diagnostics.hpp"
#include "x3db/x3d.hpp"

namespace x3db {

enum class ControllerKind {
    AccumulateController,
    LinearController,
    VertexAnimationTrack,
    NodeAnimationTrack,
};

enum class TrackValueKind { Float, Vec3, Quaternion, CoordinateSet };

struct ControllerSpec {
    ControllerKind kind = ControllerKind::AccumulateController;
    std::string name; // DEF of the source node, may be empty

    // AccumulateController
    double cycle_interval = 1.0;
    bool loop = false;

    // track kinds; key_value is flattened, value_arity doubles per key
    std::vector<double> key;
    std::vector<double> key_value;
    size_t value_arity = 0;
    TrackValueKind value_kind = TrackValueKind::Float;
    std::string controller;   // DEF of the driving TimeSensor
    std::string target_node;  // DEF of the animated node, may be empty
    std::string target_field;
};

struct AnimationMap {
    std::vector<ControllerSpec> controllers;
    DiagnosticList diags;
};

/// Requires rewrite_routes to have run so interpolators carry nested
/// TimeSensor sources and sit under their target nodes.
AnimationMap map_animation(const SceneDocument& doc);

/// Piecewise-linear sampling oracle (spherical-linear for quaternions);
/// clamps outside the key range and is exact at key points.
Result<std::vector<double>> evaluate_interpolator(std::span<const double> key,
                                                  std::span<const double> values,
                                                  size_t value_arity, TrackValueKind kind,
                                                  double fraction);

/// X3D axis-angle (x y z angle) to quaternion flattened as (x y z w).
std::vector<double> axis_angle_values_to_quaternions(std::span<const double> axis_angle_values);

} // namespace x3db
