#pragma once

// Lexer and recursive-descent codecs for the brace-style OGRE script family:
// .material scripts (classic technique/pass materials and hlms blocks with
// opaque properties) and .compositor scripts. Statements end at newlines and
// a block is `keyword [name] modifier* { ... }`.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "x3db/diagnostics.hpp"

namespace x3db {

enum class ScriptTokenKind { Atom, String, LBrace, RBrace, Newline };

struct ScriptToken {
    ScriptTokenKind kind = ScriptTokenKind::Atom;
    std::string text; // quotes stripped for String
    int line = 0;
    int column = 0;
};

Result<std::vector<ScriptToken>> tokenize_script(std::string_view bytes);

struct ScriptProperty {
    std::string key;
    std::vector<std::string> values;

    bool operator==(const ScriptProperty&) const = default;
};

struct ScriptBlock {
    std::string keyword;
    std::string name; // empty when the header has no name token
    std::vector<std::string> modifiers;
    std::vector<ScriptProperty> properties;
    std::vector<ScriptBlock> children;
    int line = 0;
    int column = 0;
};

Result<std::vector<ScriptBlock>> parse_script_blocks(std::string_view bytes);
std::string serialize_script_blocks(const std::vector<ScriptBlock>& blocks);

// .material scripts

struct OgrePass {
    std::optional<Eigen::Vector3d> ambient;
    std::optional<Eigen::Vector3d> diffuse;
    std::optional<double> diffuse_alpha; // only with diffuse
    std::optional<Eigen::Vector3d> specular;
    double shininess = 0.0; // meaningful when specular is set
    std::optional<Eigen::Vector3d> emissive;
    std::optional<std::string> scene_blend;
    std::vector<std::string> texture_units; // texture file names
    std::vector<ScriptProperty> extra;      // unknown properties, kept verbatim
};

struct OgreTechnique {
    std::vector<OgrePass> passes;
};

struct OgreMaterial {
    std::string name;
    std::vector<OgreTechnique> techniques;
};

struct HlmsMaterial {
    std::string name;
    std::string shader_type;
    std::vector<ScriptProperty> properties; // opaque, keys unique
};

using MaterialEntry = std::variant<OgreMaterial, HlmsMaterial>;

Result<std::vector<MaterialEntry>> parse_material_script(std::string_view bytes);
std::string serialize_material_script(const std::vector<MaterialEntry>& entries);

bool material_entry_equal(const MaterialEntry& a, const MaterialEntry& b);

// .compositor scripts

enum class CompositorInput { None, Previous };
enum class CompositorPassKind { RenderQuad, RenderScene };

struct CompositorTexture {
    std::string name;
    std::string width_spec;  // number or target_width
    std::string height_spec; // number or target_height
    std::string format;      // e.g. PF_A8R8G8B8

    bool operator==(const CompositorTexture&) const = default;
};

struct CompositorScriptPass {
    CompositorPassKind kind = CompositorPassKind::RenderQuad;
    std::string material; // may be empty
    std::vector<std::pair<int, std::string>> inputs; // slot, texture name

    bool operator==(const CompositorScriptPass&) const = default;
};

struct TargetBlock {
    std::string target_name; // empty for the output block
    CompositorInput input_mode = CompositorInput::None;
    std::vector<CompositorScriptPass> passes;

    bool operator==(const TargetBlock&) const = default;
};

struct CompositorTechnique {
    std::vector<CompositorTexture> textures;
    std::vector<TargetBlock> targets;
    TargetBlock output;

    bool operator==(const CompositorTechnique&) const = default;
};

struct CompositorScript {
    std::string name;
    std::vector<CompositorTechnique> techniques;

    bool operator==(const CompositorScript&) const = default;
};

Result<std::vector<CompositorScript>> parse_compositor_script(std::string_view bytes);
std::string serialize_compositor_script(const std::vector<CompositorScript>& scripts);

} // namespace x3db
