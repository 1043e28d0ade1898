#include "x3db/transform.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

using namespace x3db;

namespace {

constexpr double kPi = 3.14159265358979323846;

// the 24 rotations mapping signed axes onto signed axes, as quaternions
std::vector<Eigen::Quaterniond> signed_axis_rotations() {
    std::vector<Eigen::Quaterniond> out;
    const Eigen::Vector3d axes[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<Eigen::Matrix3d> seen;
    for (int xa = 0; xa < 3; ++xa)
        for (int xs = -1; xs <= 1; xs += 2)
            for (int ya = 0; ya < 3; ++ya)
                for (int ys = -1; ys <= 1; ys += 2) {
                    if (ya == xa)
                        continue;
                    Eigen::Vector3d x = xs * axes[xa];
                    Eigen::Vector3d y = ys * axes[ya];
                    Eigen::Vector3d z = x.cross(y);
                    Eigen::Matrix3d m;
                    m.col(0) = x;
                    m.col(1) = y;
                    m.col(2) = z;
                    out.emplace_back(m);
                }
    return out;
}

AxisAngle to_axis_angle(const Eigen::Quaterniond& q) {
    Eigen::AngleAxisd aa(q);
    AxisAngle out;
    out.axis = aa.axis();
    out.angle = aa.angle();
    return out;
}

double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST(ComposeMatrix, IdentityByDefault) {
    TransformParams p;
    EXPECT_TRUE(compose_matrix(p).isApprox(Eigen::Matrix4d::Identity()));
}

TEST(ComposeMatrix, TranslationOnly) {
    TransformParams p;
    p.translation = {1, 2, 3};
    Eigen::Matrix4d m = compose_matrix(p);
    EXPECT_EQ(m(0, 3), 1);
    EXPECT_EQ(m(1, 3), 2);
    EXPECT_EQ(m(2, 3), 3);
}

TEST(ComposeMatrix, CenterConjugatesScale) {
    // M = T(c)·S·T(−c): the center itself is a fixed point of the scaling
    TransformParams p;
    p.center = {1, 1, 1};
    p.scale = {2, 2, 2};
    Eigen::Matrix4d m = compose_matrix(p);
    Eigen::Vector4d at_center = m * Eigen::Vector4d(1, 1, 1, 1);
    EXPECT_NEAR(at_center.x(), 1, 1e-12);
    EXPECT_NEAR(at_center.y(), 1, 1e-12);
    EXPECT_NEAR(at_center.z(), 1, 1e-12);
    Eigen::Vector4d away = m * Eigen::Vector4d(2, 1, 1, 1);
    EXPECT_NEAR(away.x(), 3, 1e-12);
}

TEST(ComposeMatrix, ScaleOrientationFrame) {
    // scale 2 along the axis rotated 45° in the xy plane
    TransformParams p;
    p.scale = {2, 1, 1};
    p.scale_orientation.axis = {0, 0, 1};
    p.scale_orientation.angle = kPi / 4;
    Eigen::Matrix4d m = compose_matrix(p);
    // (1,1,0) lies on the stretch axis and doubles
    Eigen::Vector4d on_axis = m * Eigen::Vector4d(1, 1, 0, 1);
    EXPECT_NEAR(on_axis.x(), 2, 1e-12);
    EXPECT_NEAR(on_axis.y(), 2, 1e-12);
    // (1,-1,0) is perpendicular to it and keeps its length
    Eigen::Vector4d across = m * Eigen::Vector4d(1, -1, 0, 1);
    EXPECT_NEAR(across.x(), 1, 1e-12);
    EXPECT_NEAR(across.y(), -1, 1e-12);
}

TEST(Quat, CanonicalNonNegativeW) {
    Eigen::Quaterniond q(-0.5, 0.5, 0.5, 0.5);
    Eigen::Quaterniond c = canonical_quat(q);
    EXPECT_GE(c.w(), 0.0);
    EXPECT_NEAR(std::abs(q.dot(c)), 1.0, 1e-12);
}

TEST(Decompose, PlainTrs) {
    TransformParams p;
    p.translation = {1, 2, 3};
    p.rotation.axis = {0, 1, 0};
    p.rotation.angle = kPi / 2;
    p.scale = {2, 3, 4};
    Result<TrsNodePair> r = decompose_transform(p);
    ASSERT_TRUE(r.ok());
    Eigen::Matrix4d recomposed = r->outer.matrix() * r->inner.matrix();
    EXPECT_LT(max_abs_diff(recomposed, compose_matrix(p)), 1e-12);
}

TEST(Decompose, CenterMovesToInnerTranslation) {
    TransformParams p;
    p.center = {5, 0, 0};
    p.scale = {2, 2, 2};
    Result<TrsNodePair> r = decompose_transform(p);
    ASSERT_TRUE(r.ok());
    Eigen::Matrix4d recomposed = r->outer.matrix() * r->inner.matrix();
    EXPECT_LT(max_abs_diff(recomposed, compose_matrix(p)), 1e-12);
}

TEST(Decompose, UniformScaleAllowsAnyScaleOrientation) {
    TransformParams p;
    p.scale = {3, 3, 3};
    p.scale_orientation.axis = Eigen::Vector3d(1, 2, 3).normalized();
    p.scale_orientation.angle = 0.7;
    Result<TrsNodePair> r = decompose_transform(p);
    ASSERT_TRUE(r.ok());
    EXPECT_LT(max_abs_diff(r->outer.matrix() * r->inner.matrix(), compose_matrix(p)), 1e-9);
}

TEST(Decompose, ShearRejected) {
    TransformParams p;
    p.scale = {2, 1, 1};
    p.scale_orientation.axis = {0, 0, 1};
    p.scale_orientation.angle = kPi / 4;
    Result<TrsNodePair> r = decompose_transform(p);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.diags.contains("shear-not-representable"));
}

TEST(Decompose, NegativeScalePreserved) {
    TransformParams p;
    p.scale = {-1, 2, 1};
    Result<TrsNodePair> r = decompose_transform(p);
    ASSERT_TRUE(r.ok());
    EXPECT_LT(max_abs_diff(r->outer.matrix() * r->inner.matrix(), compose_matrix(p)), 1e-12);
}

TEST(Decompose, SignedAxisPermutationProperty) {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> span(-10, 10);
    std::uniform_real_distribution<double> scale_span(0.1, 5);
    std::uniform_real_distribution<double> angle_span(-kPi, kPi);
    std::vector<Eigen::Quaterniond> axis_rotations = signed_axis_rotations();
    ASSERT_EQ(axis_rotations.size(), 24u);

    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        TransformParams p;
        p.translation = {span(rng), span(rng), span(rng)};
        p.center = {span(rng), span(rng), span(rng)};
        p.rotation.axis = Eigen::Vector3d(span(rng), span(rng), span(rng));
        if (p.rotation.axis.norm() < 1e-6)
            p.rotation.axis = {0, 0, 1};
        p.rotation.axis.normalize();
        p.rotation.angle = angle_span(rng);
        p.scale = {scale_span(rng), scale_span(rng), scale_span(rng)};
        p.scale_orientation = to_axis_angle(axis_rotations[i % axis_rotations.size()]);

        Result<TrsNodePair> r = decompose_transform(p);
        ASSERT_TRUE(r.ok()) << "sample " << i;
        worst = std::max(
            worst, max_abs_diff(r->outer.matrix() * r->inner.matrix(), compose_matrix(p)));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Decompose, ShearRejectionProperty) {
    std::mt19937_64 rng(20240818);
    std::uniform_real_distribution<double> unit(-1, 1);
    std::uniform_real_distribution<double> angle_span(0.1, 1.4);
    int rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        TransformParams p;
        Eigen::Vector3d axis(unit(rng), unit(rng), unit(rng));
        if (axis.norm() < 1e-3)
            axis = {1, 1, 1};
        axis.normalize();
        p.scale_orientation.axis = axis;
        // steer well clear of 90° multiples so the rotation never permutes axes
        p.scale_orientation.angle = angle_span(rng);
        p.scale = {1, 2 + unit(rng), 4 + unit(rng)};
        if (decompose_transform(p).diags.contains("shear-not-representable"))
            ++rejected;
    }
    EXPECT_EQ(rejected, 1000);
}

TEST(TransformFromNode, ReadsFieldsAndDefaults) {
    SceneDocument doc = parse_x3d(
        "<Scene><Transform DEF=\"T\" translation=\"1 2 3\" center=\"0 1 0\" "
        "rotation=\"0 1 0 1.57\" scale=\"2 2 2\" scaleOrientation=\"1 0 0 0.5\"/>"
        "<Transform DEF=\"D\"/></Scene>");
    ASSERT_FALSE(doc.diagnostics.has_errors());
    TransformParams p = transform_params_from_node(*doc.find_def("T"));
    EXPECT_EQ(p.translation.y(), 2);
    EXPECT_EQ(p.center.y(), 1);
    EXPECT_EQ(p.rotation.axis.y(), 1);
    EXPECT_EQ(p.rotation.angle, 1.57);
    EXPECT_EQ(p.scale.x(), 2);
    EXPECT_EQ(p.scale_orientation.angle, 0.5);

    TransformParams d = transform_params_from_node(*doc.find_def("D"));
    EXPECT_TRUE(d.translation.isZero());
    EXPECT_EQ(d.rotation.angle, 0);
    EXPECT_EQ(d.scale.x(), 1);
}

TEST(TransformFromNode, MalformedFieldDiagnosed) {
    SceneDocument doc =
        parse_x3d("<Scene><Transform DEF=\"T\" translation=\"1 2\"/></Scene>");
    DiagnosticList diags;
    transform_params_from_node(*doc.find_def("T"), &diags);
    EXPECT_TRUE(diags.contains("bad-field"));
}
