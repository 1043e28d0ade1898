#include "x3db/transform.hpp"

#include <cmath>

namespace x3db {

namespace {

constexpr double kAxisSnapTolerance = 1e-6; // float round trip through XML text
constexpr double kUniformScaleTolerance = 1e-9;

Eigen::Matrix4d translation_matrix(const Eigen::Vector3d& t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 1>(0, 3) = t;
    return m;
}

Eigen::Matrix4d rotation_matrix(const Eigen::Quaterniond& q) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 3>(0, 0) = q.toRotationMatrix();
    return m;
}

Eigen::Matrix4d scale_matrix(const Eigen::Vector3d& s) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = s.x();
    m(1, 1) = s.y();
    m(2, 2) = s.z();
    return m;
}

/// Snaps a rotation matrix to a signed permutation. Succeeds when every
/// column is within tolerance of a signed unit basis vector.
bool snap_to_signed_permutation(const Eigen::Matrix3d& r, Eigen::Matrix3i& perm) {
    perm.setZero();
    bool row_used[3] = {false, false, false};
    for (int col = 0; col < 3; ++col) {
        int hit_row = -1;
        int sign = 0;
        for (int row = 0; row < 3; ++row) {
            double v = r(row, col);
            if (std::abs(std::abs(v) - 1.0) <= kAxisSnapTolerance) {
                hit_row = row;
                sign = v > 0 ? 1 : -1;
            } else if (std::abs(v) > kAxisSnapTolerance) {
                return false;
            }
        }
        if (hit_row < 0 || row_used[hit_row])
            return false;
        row_used[hit_row] = true;
        perm(hit_row, col) = sign;
    }
    return true;
}

} // namespace

Eigen::Matrix4d TrsNode::matrix() const {
    return translation_matrix(translation) * rotation_matrix(orientation) * scale_matrix(scale);
}

Eigen::Quaterniond quat_from_axis_angle(const AxisAngle& aa) {
    double len = aa.axis.norm();
    if (len < 1e-12)
        return Eigen::Quaterniond::Identity();
    return Eigen::Quaterniond(Eigen::AngleAxisd(aa.angle, aa.axis / len));
}

Eigen::Quaterniond canonical_quat(Eigen::Quaterniond q) {
    if (q.w() < 0)
        q.coeffs() = -q.coeffs();
    return q;
}

Eigen::Matrix4d compose_matrix(const TransformParams& p) {
    Eigen::Quaterniond r = quat_from_axis_angle(p.rotation);
    Eigen::Quaterniond sr = quat_from_axis_angle(p.scale_orientation);
    return translation_matrix(p.translation) * translation_matrix(p.center) *
           rotation_matrix(r) * rotation_matrix(sr) * scale_matrix(p.scale) *
           rotation_matrix(sr.conjugate()) * translation_matrix(-p.center);
}

Result<TrsNodePair> decompose_transform(const TransformParams& p) {
    Eigen::Quaterniond sr = quat_from_axis_angle(p.scale_orientation);
    Eigen::Vector3d permuted_scale;

    Eigen::Matrix3i perm;
    double spread = p.scale.maxCoeff() - p.scale.minCoeff();
    if (snap_to_signed_permutation(sr.toRotationMatrix(), perm)) {
        // S' = P·diag(s)·Pᵀ has diagonal (P s²-weighted) = permuted entries of s
        for (int i = 0; i < 3; ++i) {
            permuted_scale(i) = p.scale(i); // fallback, overwritten below
            for (int k = 0; k < 3; ++k)
                if (perm(i, k) != 0)
                    permuted_scale(i) = p.scale(k);
        }
    } else if (spread <= kUniformScaleTolerance * std::max(1.0, p.scale.cwiseAbs().maxCoeff())) {
        permuted_scale = p.scale;
    } else {
        return Result<TrsNodePair>::failure(
            "shear-not-representable",
            "scaleOrientation is not a 90-degree axis rotation and the scale is non-uniform; "
            "the sheared transform has no translation/rotation/scale form");
    }

    TrsNodePair pair;
    pair.outer.translation = p.translation + p.center;
    pair.outer.orientation = canonical_quat(quat_from_axis_angle(p.rotation));
    pair.outer.scale = Eigen::Vector3d::Ones();
    pair.inner.translation = -permuted_scale.cwiseProduct(p.center);
    pair.inner.orientation = Eigen::Quaterniond::Identity();
    pair.inner.scale = permuted_scale;

    Result<TrsNodePair> result;
    result.value = pair;
    return result;
}

TransformParams transform_params_from_node(const X3dNode& node, DiagnosticList* diags) {
    TransformParams p;
    auto report = [&](const char* field) {
        if (diags)
            diags->error(node.line, node.column, "bad-field",
                         std::string("Transform field '") + field + "' is malformed");
    };
    auto vec3 = [&](const char* name, Eigen::Vector3d& out) {
        const std::string* v = node.attribute(name);
        if (!v)
            return;
        bool ok = true;
        std::vector<double> f = parse_floats(*v, &ok);
        if (!ok || f.size() != 3) {
            report(name);
            return;
        }
        out = Eigen::Vector3d(f[0], f[1], f[2]);
    };
    auto rotation = [&](const char* name, AxisAngle& out) {
        const std::string* v = node.attribute(name);
        if (!v)
            return;
        bool ok = true;
        std::vector<double> f = parse_floats(*v, &ok);
        if (!ok || f.size() != 4) {
            report(name);
            return;
        }
        out.axis = Eigen::Vector3d(f[0], f[1], f[2]);
        out.angle = f[3];
    };
    vec3("translation", p.translation);
    vec3("center", p.center);
    vec3("scale", p.scale);
    rotation("rotation", p.rotation);
    rotation("scaleOrientation", p.scale_orientation);
    if (diags) {
        for (int i = 0; i < 3; ++i) {
            if (p.scale(i) == 0.0) {
                diags->error(node.line, node.column, "bad-field",
                             "Transform scale components must be nonzero");
                break;
            }
        }
    }
    return p;
}

} // namespace x3db
