#include "x3db/animation.hpp"

#include <Eigen/Geometry>
#include <algorithm>

#include "x3db/transform.hpp"

namespace x3db {

namespace {

struct Walker {
    const SceneDocument& doc;
    AnimationMap& out;

    void visit(const X3dNode& node, const X3dNode* parent) {
        if (node.kind == NodeKind::TimeSensor && !node.is_use())
            add_time_sensor(node);
        if (is_interpolator(node.kind) && !node.is_use())
            add_track(node, parent);
        for (const X3dNode& child : node.children)
            visit(child, &node);
    }

    void add_time_sensor(const X3dNode& node) {
        ControllerSpec spec;
        spec.kind = ControllerKind::AccumulateController;
        spec.name = node.def_name;
        spec.cycle_interval = attr_float(node, "cycleInterval").value_or(1.0);
        spec.loop = attr_bool(node, "loop").value_or(false);
        out.controllers.push_back(std::move(spec));
    }

    const X3dNode* nested_time_sensor(const X3dNode& node) const {
        for (const X3dNode& child : node.children) {
            if (child.kind != NodeKind::TimeSensor)
                continue;
            if (child.is_use())
                return doc.find_def(child.use_name); // may be null for external names
            return &child;
        }
        return nullptr;
    }

    static std::string canonical_field(NodeKind interpolator) {
        switch (interpolator) {
        case NodeKind::PositionInterpolator: return "set_translation";
        case NodeKind::OrientationInterpolator: return "set_rotation";
        case NodeKind::CoordinateInterpolator: return "set_point";
        default: return {};
        }
    }

    static bool parent_accepts(NodeKind interpolator, NodeKind parent) {
        switch (interpolator) {
        case NodeKind::PositionInterpolator:
        case NodeKind::OrientationInterpolator:
            return parent == NodeKind::Transform;
        case NodeKind::CoordinateInterpolator:
            return parent == NodeKind::Coordinate;
        case NodeKind::ScalarInterpolator:
            return parent != NodeKind::Scene && parent != NodeKind::Group;
        default:
            return false;
        }
    }

    /// The rewrite leaves a USE reference under the target node; find it to
    /// recover the animated node. Falls back to the interpolator's own
    /// parent when the definition itself was authored in place.
    void find_target(const X3dNode& node, const X3dNode* parent, ControllerSpec& spec) const {
        if (!node.def_name.empty()) {
            const X3dNode* found_parent = nullptr;
            const X3dNode* found_use = nullptr;
            find_use_site(doc.root, node.def_name, node.kind, found_parent, found_use);
            if (found_use && found_parent) {
                spec.target_node = found_parent->def_name;
                if (const std::string* cf = found_use->attribute("containerField"))
                    spec.target_field = *cf;
                else
                    spec.target_field = canonical_field(node.kind);
                return;
            }
        }
        if (parent && parent_accepts(node.kind, parent->kind)) {
            spec.target_node = parent->def_name;
            spec.target_field = canonical_field(node.kind);
        }
    }

    static void find_use_site(const X3dNode& node, const std::string& def, NodeKind kind,
                              const X3dNode*& found_parent, const X3dNode*& found_use) {
        for (const X3dNode& child : node.children) {
            if (found_use)
                return;
            if (child.kind == kind && child.use_name == def) {
                found_parent = &node;
                found_use = &child;
                return;
            }
            find_use_site(child, def, kind, found_parent, found_use);
        }
    }

    void add_track(const X3dNode& node, const X3dNode* parent) {
        const X3dNode* sensor = nested_time_sensor(node);
        bool has_sensor_child = false;
        for (const X3dNode& child : node.children)
            has_sensor_child |= child.kind == NodeKind::TimeSensor;
        if (!has_sensor_child) {
            out.diags.warning(node.line, node.column, "interpolator-unrouted",
                              "interpolator '" + std::string(node_kind_name(node.kind)) +
                                  (node.def_name.empty() ? "" : " " + node.def_name) +
                                  "' has no nested TimeSensor; omitted");
            return;
        }

        ControllerSpec spec;
        switch (node.kind) {
        case NodeKind::ScalarInterpolator:
            spec.kind = ControllerKind::LinearController;
            spec.value_kind = TrackValueKind::Float;
            break;
        case NodeKind::CoordinateInterpolator:
            spec.kind = ControllerKind::VertexAnimationTrack;
            spec.value_kind = TrackValueKind::CoordinateSet;
            break;
        case NodeKind::PositionInterpolator:
            spec.kind = ControllerKind::NodeAnimationTrack;
            spec.value_kind = TrackValueKind::Vec3;
            break;
        case NodeKind::OrientationInterpolator:
        default:
            spec.kind = ControllerKind::NodeAnimationTrack;
            spec.value_kind = TrackValueKind::Quaternion;
            break;
        }
        spec.name = node.def_name;
        if (sensor)
            spec.controller = sensor->def_name;
        else
            for (const X3dNode& child : node.children)
                if (child.kind == NodeKind::TimeSensor && child.is_use())
                    spec.controller = child.use_name;

        spec.key = attr_floats(node, "key");
        std::vector<double> raw_values = attr_floats(node, "keyValue");
        if (!std::is_sorted(spec.key.begin(), spec.key.end())) {
            out.diags.error(node.line, node.column, "bad-field",
                            "interpolator key list must be nondecreasing");
            return;
        }
        switch (node.kind) {
        case NodeKind::ScalarInterpolator:
            spec.value_arity = 1;
            spec.key_value = std::move(raw_values);
            break;
        case NodeKind::PositionInterpolator:
            spec.value_arity = 3;
            spec.key_value = std::move(raw_values);
            break;
        case NodeKind::OrientationInterpolator:
            if (raw_values.size() % 4 != 0) {
                out.diags.error(node.line, node.column, "bad-field",
                                "OrientationInterpolator keyValue arity must be 4");
                return;
            }
            spec.value_arity = 4;
            spec.key_value = axis_angle_values_to_quaternions(raw_values);
            break;
        case NodeKind::CoordinateInterpolator:
        default:
            if (spec.key.empty() || raw_values.size() % spec.key.size() != 0 ||
                (raw_values.size() / spec.key.size()) % 3 != 0) {
                out.diags.error(node.line, node.column, "bad-field",
                                "CoordinateInterpolator keyValue must hold the same number of "
                                "points per key");
                return;
            }
            spec.value_arity = raw_values.size() / spec.key.size();
            spec.key_value = std::move(raw_values);
            break;
        }
        if (spec.value_arity != 0 && spec.key_value.size() != spec.key.size() * spec.value_arity) {
            out.diags.error(node.line, node.column, "bad-field",
                            "interpolator keyValue count must equal key count times value arity");
            return;
        }
        find_target(node, parent, spec);
        out.controllers.push_back(std::move(spec));
    }
};

} // namespace

AnimationMap map_animation(const SceneDocument& doc) {
    // one walk gathers everything; controllers are then listed before tracks,
    // each group in document order
    AnimationMap all;
    Walker walker{doc, all};
    walker.visit(doc.root, nullptr);

    AnimationMap map;
    for (auto& c : all.controllers)
        if (c.kind == ControllerKind::AccumulateController)
            map.controllers.push_back(std::move(c));
    for (auto& c : all.controllers)
        if (c.kind != ControllerKind::AccumulateController)
            map.controllers.push_back(std::move(c));
    map.diags.merge(all.diags);
    return map;
}

std::vector<double> axis_angle_values_to_quaternions(std::span<const double> axis_angle_values) {
    std::vector<double> out;
    out.reserve(axis_angle_values.size());
    for (size_t i = 0; i + 3 < axis_angle_values.size(); i += 4) {
        AxisAngle aa;
        aa.axis = Eigen::Vector3d(axis_angle_values[i], axis_angle_values[i + 1],
                                  axis_angle_values[i + 2]);
        aa.angle = axis_angle_values[i + 3];
        Eigen::Quaterniond q = canonical_quat(quat_from_axis_angle(aa));
        out.push_back(q.x());
        out.push_back(q.y());
        out.push_back(q.z());
        out.push_back(q.w());
    }
    return out;
}

Result<std::vector<double>> evaluate_interpolator(std::span<const double> key,
                                                  std::span<const double> values,
                                                  size_t value_arity, TrackValueKind kind,
                                                  double fraction) {
    if (key.empty())
        return Result<std::vector<double>>::failure("empty-key",
                                                    "interpolator has an empty key list");
    if (value_arity == 0 || values.size() != key.size() * value_arity)
        return Result<std::vector<double>>::failure(
            "bad-field", "keyValue count must equal key count times value arity");

    auto value_at = [&](size_t idx) {
        return std::vector<double>(values.begin() + static_cast<long>(idx * value_arity),
                                   values.begin() + static_cast<long>((idx + 1) * value_arity));
    };

    Result<std::vector<double>> result;
    if (fraction <= key.front()) {
        result.value = value_at(0);
        return result;
    }
    if (fraction >= key.back()) {
        result.value = value_at(key.size() - 1);
        return result;
    }
    size_t hi = 1;
    while (hi < key.size() && key[hi] < fraction)
        ++hi;
    // exact key hits return the stored value bitwise
    if (key[hi] == fraction) {
        result.value = value_at(hi);
        return result;
    }
    size_t lo = hi - 1;
    if (key[lo] == fraction) {
        result.value = value_at(lo);
        return result;
    }
    double t = (fraction - key[lo]) / (key[hi] - key[lo]);

    std::vector<double> a = value_at(lo);
    std::vector<double> b = value_at(hi);
    std::vector<double> v(value_arity);
    if (kind == TrackValueKind::Quaternion && value_arity == 4) {
        Eigen::Quaterniond qa(a[3], a[0], a[1], a[2]);
        Eigen::Quaterniond qb(b[3], b[0], b[1], b[2]);
        Eigen::Quaterniond q = qa.slerp(t, qb);
        v = {q.x(), q.y(), q.z(), q.w()};
    } else {
        for (size_t i = 0; i < value_arity; ++i)
            v[i] = a[i] + (b[i] - a[i]) * t;
    }
    result.value = std::move(v);
    return result;
}

} // namespace x3db
