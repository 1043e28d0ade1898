#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

// X3DBRIDGE_CLI is the path of the built binary, injected by the build.

namespace fs = std::filesystem;

namespace {

const char* kScene = R"(<X3D version="3.2"><Scene>
<Shape DEF="Box">
  <Appearance DEF="Example">
    <Material ambientIntensity="0.508497" diffuseColor="0.337255 0.4 0.788235"
              specularColor="1 1 1"/>
  </Appearance>
  <IndexedTriangleSet coordIndex="0 1 2 0 2 3">
    <Coordinate point="0 0 0 1 0 0 1 1 0 0 1 0"/>
    <Normal vector="0 0 1 0 0 1 0 0 1 0 0 1"/>
  </IndexedTriangleSet>
</Shape>
</Scene></X3D>)";

const char* kGaussBlur =
    "compositor GaussBlur {\n"
    "  technique {\n"
    "    texture rt0 target_width target_height PF_A8R8G8B8\n"
    "    texture rt1 target_width target_height PF_A8R8G8B8\n"
    "    target rt0 {\n"
    "      input previous\n"
    "    }\n"
    "    target rt1 {\n"
    "      input none\n"
    "      pass render_quad {\n"
    "        material BlurVertical\n"
    "        input 0 rt0\n"
    "      }\n"
    "    }\n"
    "    target_output {\n"
    "      input none\n"
    "      pass render_quad {\n"
    "        material BlurHorizontal\n"
    "        input 0 rt1\n"
    "      }\n"
    "    }\n"
    "  }\n"
    "}\n";

const char* kGaussBlurSwapped =
    "compositor GaussBlur {\n"
    "  technique {\n"
    "    texture rt0 target_width target_height PF_A8R8G8B8\n"
    "    texture rt1 target_width target_height PF_A8R8G8B8\n"
    "    target rt1 {\n"
    "      input none\n"
    "      pass render_quad {\n"
    "        material BlurVertical\n"
    "        input 0 rt0\n"
    "      }\n"
    "    }\n"
    "    target rt0 {\n"
    "      input previous\n"
    "    }\n"
    "    target_output {\n"
    "      input none\n"
    "      pass render_quad {\n"
    "        material BlurHorizontal\n"
    "        input 0 rt1\n"
    "      }\n"
    "    }\n"
    "  }\n"
    "}\n";

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const ::testing::TestInfo* info =
            ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("x3dbridge-") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) const {
        fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    CliResult run(const std::string& args) const {
        fs::path out = dir_ / "stdout.txt";
        fs::path err = dir_ / "stderr.txt";
        std::string command = std::string(X3DBRIDGE_CLI) + " " + args + " >'" + out.string() +
                              "' 2>'" + err.string() + "'";
        int raw = std::system(command.c_str());
        CliResult result;
        result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        result.out = slurp(out);
        result.err = slurp(err);
        return result;
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, ConvertToOgreEmitsArtifacts) {
    fs::path scene = write("scene.x3d", kScene);
    fs::path out = dir_ / "out";
    CliResult r = run("convert --to-ogre '" + scene.string() + "' --out '" + out.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(fs::exists(out / "scene.mesh.xml"));
    EXPECT_TRUE(fs::exists(out / "scene.material"));
    EXPECT_TRUE(fs::exists(out / "scene.report.json"));
    EXPECT_FALSE(fs::exists(out / "scene.compositor"));

    std::string material = slurp(out / "scene.material");
    EXPECT_NE(material.find("material Example"), std::string::npos);
    EXPECT_NE(material.find("ambient 0.508497 0.508497 0.508497"), std::string::npos);
    EXPECT_NE(material.find("diffuse 0.337255 0.4 0.788235"), std::string::npos);
    EXPECT_NE(material.find("specular 1 1 1 25"), std::string::npos);

    std::string mesh = slurp(out / "scene.mesh.xml");
    EXPECT_NE(mesh.find("faces count=\"2\""), std::string::npos);
    EXPECT_NE(mesh.find("vertexcount=\"4\""), std::string::npos);

    std::string report = slurp(out / "scene.report.json");
    EXPECT_NE(report.find("\"name\": \"scene\""), std::string::npos);
    EXPECT_NE(report.find("scene.mesh.xml"), std::string::npos);
    EXPECT_NE(report.find("\"from\": \"Box\""), std::string::npos);
}

TEST_F(CliTest, ConvertIsDeterministic) {
    fs::path scene = write("scene.x3d", kScene);
    fs::path a = dir_ / "a";
    fs::path b = dir_ / "b";
    EXPECT_EQ(run("convert --to-ogre '" + scene.string() + "' --out '" + a.string() + "'").status,
              0);
    EXPECT_EQ(run("convert --to-ogre '" + scene.string() + "' --out '" + b.string() + "'").status,
              0);
    EXPECT_EQ(slurp(a / "scene.mesh.xml"), slurp(b / "scene.mesh.xml"));
    EXPECT_EQ(slurp(a / "scene.material"), slurp(b / "scene.material"));
    EXPECT_EQ(slurp(a / "scene.report.json"), slurp(b / "scene.report.json"));
}

TEST_F(CliTest, ConvertToX3dRebuildsScene) {
    fs::path scene = write("scene.x3d", kScene);
    fs::path out = dir_ / "out";
    ASSERT_EQ(
        run("convert --to-ogre '" + scene.string() + "' --out '" + out.string() + "'").status, 0);
    fs::path back = dir_ / "back";
    CliResult r = run("convert --to-x3d '" + (out / "scene.mesh.xml").string() + "' '" +
                      (out / "scene.material").string() + "' --out '" + back.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    std::string rebuilt = slurp(back / "scene.x3d");
    EXPECT_NE(rebuilt.find("DEF=\"Example\""), std::string::npos);
    EXPECT_NE(rebuilt.find("<IndexedTriangleSet"), std::string::npos);
}

TEST_F(CliTest, ConvertNeedsExactlyOneDirection) {
    fs::path scene = write("scene.x3d", kScene);
    CliResult none = run("convert '" + scene.string() + "'");
    EXPECT_EQ(none.status, 1);
    EXPECT_NE(none.err.find("unsupported-input"), std::string::npos);
    CliResult both = run("convert --to-ogre --to-x3d '" + scene.string() + "'");
    EXPECT_EQ(both.status, 1);
}

TEST_F(CliTest, MissingInputReportsIoError) {
    CliResult r = run("validate '" + (dir_ / "nope.x3d").string() + "'");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("io-error"), std::string::npos);
}

TEST_F(CliTest, ValidateAcceptsOrderedCompositor) {
    fs::path script = write("gauss.compositor", kGaussBlur);
    CliResult r = run("validate '" + script.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, ValidateRejectsSwappedPassesAndSuggests) {
    fs::path script = write("swapped.compositor", kGaussBlurSwapped);
    CliResult r = run("validate '" + script.string() + "'");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("rt-read-before-write"), std::string::npos);

    CliResult suggested = run("validate --suggest-order '" + script.string() + "'");
    EXPECT_EQ(suggested.status, 1);
    EXPECT_NE(suggested.out.find("suggested order for 'GaussBlur': rt0 rt1 output"),
              std::string::npos);
}

TEST_F(CliTest, StrictTurnsWarningsIntoFailures) {
    fs::path scene = write("odd.x3d", "<Scene><Sound/></Scene>");
    EXPECT_EQ(run("validate '" + scene.string() + "'").status, 0);
    CliResult strict = run("validate --strict '" + scene.string() + "'");
    EXPECT_EQ(strict.status, 1);
    EXPECT_NE(strict.err.find("unknown-node"), std::string::npos);
}

TEST_F(CliTest, InspectSummarizes) {
    fs::path scene = write("scene.x3d", kScene);
    CliResult r = run("inspect '" + scene.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("X3D scene"), std::string::npos);
    EXPECT_NE(r.out.find("DEF Example (Appearance)"), std::string::npos);

    fs::path script = write("gauss.compositor", kGaussBlur);
    CliResult c = run("inspect '" + script.string() + "'");
    EXPECT_EQ(c.status, 0) << c.err;
    EXPECT_NE(c.out.find("schedule: rt0 rt1 output"), std::string::npos);
}

TEST_F(CliTest, RoundtripScene) {
    fs::path scene = write("scene.x3d", kScene);
    CliResult r = run("roundtrip '" + scene.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("roundtrip OK"), std::string::npos);
}

TEST_F(CliTest, RoundtripScripts) {
    fs::path script = write("gauss.compositor", kGaussBlur);
    CliResult r = run("roundtrip '" + script.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("roundtrip OK"), std::string::npos);

    fs::path material = write("demo.material",
                              "material Example {\n  technique {\n    pass {\n"
                              "      ambient 0.5 0.5 0.5\n    }\n  }\n}\n");
    CliResult m = run("roundtrip '" + material.string() + "'");
    EXPECT_EQ(m.status, 0) << m.err;
}

TEST_F(CliTest, ManifestRedirectsExternalUse) {
    fs::path scene = write("uses.x3d",
                           "<Scene><Shape><Appearance USE=\"Outside\"/>"
                           "<IndexedTriangleSet coordIndex=\"0 1 2\">"
                           "<Coordinate point=\"0 0 0 1 0 0 0 1 0\"/>"
                           "</IndexedTriangleSet></Shape></Scene>");
    fs::path manifest = write("registry.txt", "# external pool\nmaterial: Outside\n");
    fs::path out = dir_ / "out";
    CliResult r = run("convert --to-ogre '" + scene.string() + "' --manifest '" +
                      manifest.string() + "' --out '" + out.string() + "'");
    EXPECT_EQ(r.status, 0) << r.err;
    std::string report = slurp(out / "uses.report.json");
    EXPECT_NE(report.find("\"kind\": \"material\""), std::string::npos);
    EXPECT_NE(report.find("\"name\": \"Outside\""), std::string::npos);
    EXPECT_FALSE(fs::exists(out / "uses.material"));

    CliResult unresolved =
        run("convert --to-ogre '" + scene.string() + "' --out '" + out.string() + "'");
    EXPECT_EQ(unresolved.status, 1);
    EXPECT_NE(unresolved.err.find("unresolved-use"), std::string::npos);
}
