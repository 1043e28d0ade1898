#include "x3db/script.hpp"

#include <algorithm>

#include "diagnostics_impl.hpp"

namespace x3db {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;

bool needs_quotes(std::string_view s) {
    return s.empty() ||
           s.find_first_of(" \t\"{}") != std::string_view::npos;
}

std::string quoted_if_needed(const std::string& s) {
    if (!needs_quotes(s))
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

Result<std::vector<ScriptToken>> tokenize_script(std::string_view bytes) {
    Result<std::vector<ScriptToken>> result;
    std::vector<ScriptToken> tokens;
    int line = 1, column = 1;
    size_t i = 0;

    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++i;
    };

    while (i < bytes.size()) {
        char c = bytes[i];
        if (c == '\n') {
            if (!tokens.empty() && tokens.back().kind != ScriptTokenKind::Newline)
                tokens.push_back({ScriptTokenKind::Newline, "\n", line, column});
            advance(c);
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            advance(c);
            continue;
        }
        if (c == '/' && i + 1 < bytes.size() && bytes[i + 1] == '/') {
            while (i < bytes.size() && bytes[i] != '\n')
                advance(bytes[i]);
            continue;
        }
        if (c == '{' || c == '}') {
            tokens.push_back({c == '{' ? ScriptTokenKind::LBrace : ScriptTokenKind::RBrace,
                              std::string(1, c), line, column});
            advance(c);
            continue;
        }
        if (c == '"') {
            int start_line = line, start_column = column;
            advance(c);
            std::string text;
            bool closed = false;
            while (i < bytes.size()) {
                char q = bytes[i];
                if (q == '\\' && i + 1 < bytes.size() &&
                    (bytes[i + 1] == '"' || bytes[i + 1] == '\\')) {
                    advance(q);
                    text += bytes[i];
                    advance(bytes[i]);
                    continue;
                }
                if (q == '"') {
                    advance(q);
                    closed = true;
                    break;
                }
                if (q == '\n')
                    break;
                text += q;
                advance(q);
            }
            if (!closed) {
                result.diags.error(start_line, start_column, "script-syntax",
                                   "unterminated quoted string");
                return result;
            }
            tokens.push_back({ScriptTokenKind::String, std::move(text), start_line, start_column});
            continue;
        }
        int start_line = line, start_column = column;
        std::string text;
        while (i < bytes.size()) {
            char a = bytes[i];
            if (a == ' ' || a == '\t' || a == '\r' || a == '\n' || a == '{' || a == '}' ||
                a == '"')
                break;
            if (a == '/' && i + 1 < bytes.size() && bytes[i + 1] == '/')
                break;
            text += a;
            advance(a);
        }
        tokens.push_back({ScriptTokenKind::Atom, std::move(text), start_line, start_column});
    }
    result.value = std::move(tokens);
    return result;
}

namespace {

struct BlockParser {
    const std::vector<ScriptToken>& tokens;
    DiagnosticList& diags;
    size_t pos = 0;

    const ScriptToken* peek() const { return pos < tokens.size() ? &tokens[pos] : nullptr; }

    void skip_newlines() {
        while (pos < tokens.size() && tokens[pos].kind == ScriptTokenKind::Newline)
            ++pos;
    }

    // statement tokens up to a newline, brace or end
    std::vector<ScriptToken> read_statement() {
        std::vector<ScriptToken> stmt;
        while (const ScriptToken* t = peek()) {
            if (t->kind != ScriptTokenKind::Atom && t->kind != ScriptTokenKind::String)
                break;
            stmt.push_back(*t);
            ++pos;
        }
        return stmt;
    }

    bool parse_body(ScriptBlock& block) {
        while (true) {
            skip_newlines();
            const ScriptToken* t = peek();
            if (!t) {
                diags.error(block.line, block.column, "script-syntax",
                            "unexpected end of input inside block '" + block.keyword + "'");
                return false;
            }
            if (t->kind == ScriptTokenKind::RBrace) {
                ++pos;
                return true;
            }
            std::vector<ScriptToken> stmt = read_statement();
            const ScriptToken* next = peek();
            if (stmt.empty()) {
                diags.error(t->line, t->column, "script-syntax",
                            "unexpected '" + t->text + "'");
                return false;
            }
            if (next && next->kind == ScriptTokenKind::LBrace) {
                ++pos;
                ScriptBlock child;
                child.keyword = stmt[0].text;
                child.line = stmt[0].line;
                child.column = stmt[0].column;
                if (stmt.size() > 1)
                    child.name = stmt[1].text;
                for (size_t k = 2; k < stmt.size(); ++k)
                    child.modifiers.push_back(stmt[k].text);
                if (!parse_body(child))
                    return false;
                block.children.push_back(std::move(child));
                continue;
            }
            ScriptProperty prop;
            prop.key = stmt[0].text;
            for (size_t k = 1; k < stmt.size(); ++k)
                prop.values.push_back(stmt[k].text);
            block.properties.push_back(std::move(prop));
        }
    }

    std::optional<std::vector<ScriptBlock>> parse_top_level() {
        std::vector<ScriptBlock> blocks;
        while (true) {
            skip_newlines();
            const ScriptToken* t = peek();
            if (!t)
                return blocks;
            std::vector<ScriptToken> stmt = read_statement();
            const ScriptToken* next = peek();
            if (stmt.empty() || !next || next->kind != ScriptTokenKind::LBrace) {
                diags.error(t->line, t->column, "script-syntax",
                            "expected a block header followed by '{'");
                return std::nullopt;
            }
            ++pos;
            ScriptBlock block;
            block.keyword = stmt[0].text;
            block.line = stmt[0].line;
            block.column = stmt[0].column;
            if (stmt.size() > 1)
                block.name = stmt[1].text;
            for (size_t k = 2; k < stmt.size(); ++k)
                block.modifiers.push_back(stmt[k].text);
            if (!parse_body(block))
                return std::nullopt;
            blocks.push_back(std::move(block));
        }
    }
};

void serialize_block(const ScriptBlock& block, std::string& out, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    out += indent;
    out += block.keyword;
    if (!block.name.empty() || !block.modifiers.empty())
        out += " " + quoted_if_needed(block.name);
    for (const std::string& m : block.modifiers)
        out += " " + quoted_if_needed(m);
    out += " {\n";
    std::string inner(static_cast<size_t>(depth + 1) * 2, ' ');
    for (const ScriptProperty& prop : block.properties) {
        out += inner;
        out += prop.key;
        for (const std::string& v : prop.values)
            out += " " + quoted_if_needed(v);
        out += "\n";
    }
    for (const ScriptBlock& child : block.children)
        serialize_block(child, out, depth + 1);
    out += indent;
    out += "}\n";
}

} // namespace

Result<std::vector<ScriptBlock>> parse_script_blocks(std::string_view bytes) {
    Result<std::vector<ScriptBlock>> result;
    Result<std::vector<ScriptToken>> tokens = tokenize_script(bytes);
    result.diags.merge(tokens.diags);
    if (!tokens.ok())
        return result;
    BlockParser parser{*tokens.value, result.diags};
    auto blocks = parser.parse_top_level();
    if (blocks)
        result.value = std::move(*blocks);
    return result;
}

std::string serialize_script_blocks(const std::vector<ScriptBlock>& blocks) {
    std::string out;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0)
            out += "\n";
        serialize_block(blocks[i], out, 0);
    }
    return out;
}

namespace {

std::optional<Eigen::Vector3d> color_values(const ScriptProperty& prop, size_t offset,
                                            DiagnosticList& diags, int line, int column) {
    Eigen::Vector3d color;
    for (size_t i = 0; i < 3; ++i) {
        std::optional<double> v = parse_double(prop.values[offset + i]);
        if (!v) {
            diags.error(line, column, "color-arity",
                        "property '" + prop.key + "' component is not a number: " +
                            prop.values[offset + i]);
            return std::nullopt;
        }
        if (*v < 0.0 || *v > 1.0) {
            diags.error(line, column, "color-range",
                        "property '" + prop.key + "' component " + prop.values[offset + i] +
                            " is outside [0,1]");
            return std::nullopt;
        }
        color[static_cast<long>(i)] = *v;
    }
    return color;
}

bool parse_pass(const ScriptBlock& block, OgrePass& pass, DiagnosticList& diags) {
    for (const ScriptProperty& prop : block.properties) {
        if (prop.key == "ambient" || prop.key == "emissive") {
            if (prop.values.size() != 3) {
                diags.error(block.line, block.column, "color-arity",
                            "property '" + prop.key + "' needs 3 color components");
                return false;
            }
            auto c = color_values(prop, 0, diags, block.line, block.column);
            if (!c)
                return false;
            (prop.key == "ambient" ? pass.ambient : pass.emissive) = *c;
        } else if (prop.key == "diffuse") {
            if (prop.values.size() != 3 && prop.values.size() != 4) {
                diags.error(block.line, block.column, "color-arity",
                            "property 'diffuse' needs 3 color components plus optional alpha");
                return false;
            }
            auto c = color_values(prop, 0, diags, block.line, block.column);
            if (!c)
                return false;
            pass.diffuse = *c;
            if (prop.values.size() == 4) {
                std::optional<double> alpha = parse_double(prop.values[3]);
                if (!alpha || *alpha < 0.0 || *alpha > 1.0) {
                    diags.error(block.line, block.column, "color-range",
                                "diffuse alpha must be a number in [0,1]");
                    return false;
                }
                pass.diffuse_alpha = *alpha;
            }
        } else if (prop.key == "specular") {
            if (prop.values.size() != 3 && prop.values.size() != 4) {
                diags.error(block.line, block.column, "color-arity",
                            "property 'specular' needs 3 color components plus optional "
                            "shininess");
                return false;
            }
            auto c = color_values(prop, 0, diags, block.line, block.column);
            if (!c)
                return false;
            pass.specular = *c;
            if (prop.values.size() == 4) {
                std::optional<double> shininess = parse_double(prop.values[3]);
                if (!shininess) {
                    diags.error(block.line, block.column, "color-arity",
                                "specular shininess is not a number: " + prop.values[3]);
                    return false;
                }
                pass.shininess = *shininess;
            }
        } else if (prop.key == "scene_blend") {
            std::string joined;
            for (const std::string& v : prop.values) {
                if (!joined.empty())
                    joined += " ";
                joined += v;
            }
            pass.scene_blend = joined;
        } else {
            diags.warning(block.line, block.column, "unknown-property",
                          "pass property '" + prop.key + "' is outside the subset; kept verbatim");
            pass.extra.push_back(prop);
        }
    }
    for (const ScriptBlock& child : block.children) {
        if (child.keyword == "texture_unit") {
            std::string texture;
            for (const ScriptProperty& prop : child.properties) {
                if (prop.key == "texture" && !prop.values.empty())
                    texture = prop.values[0];
                else
                    diags.warning(child.line, child.column, "unknown-property",
                                  "texture_unit property '" + prop.key + "' ignored");
            }
            pass.texture_units.push_back(std::move(texture));
        } else {
            diags.warning(child.line, child.column, "unknown-block",
                          "block '" + child.keyword + "' inside pass ignored");
        }
    }
    return true;
}

} // namespace

Result<std::vector<MaterialEntry>> parse_material_script(std::string_view bytes) {
    Result<std::vector<MaterialEntry>> result;
    Result<std::vector<ScriptBlock>> blocks = parse_script_blocks(bytes);
    result.diags.merge(blocks.diags);
    if (!blocks.ok())
        return result;

    std::vector<MaterialEntry> entries;
    for (const ScriptBlock& block : *blocks.value) {
        if (block.keyword == "material") {
            OgreMaterial material;
            material.name = block.name;
            for (const ScriptBlock& tech_block : block.children) {
                if (tech_block.keyword != "technique") {
                    result.diags.warning(tech_block.line, tech_block.column, "unknown-block",
                                         "block '" + tech_block.keyword +
                                             "' inside material ignored");
                    continue;
                }
                OgreTechnique technique;
                for (const ScriptBlock& pass_block : tech_block.children) {
                    if (pass_block.keyword != "pass") {
                        result.diags.warning(pass_block.line, pass_block.column, "unknown-block",
                                             "block '" + pass_block.keyword +
                                                 "' inside technique ignored");
                        continue;
                    }
                    OgrePass pass;
                    if (!parse_pass(pass_block, pass, result.diags))
                        return result;
                    technique.passes.push_back(std::move(pass));
                }
                if (technique.passes.empty()) {
                    result.diags.error(tech_block.line, tech_block.column, "empty-material",
                                       "technique of material '" + material.name +
                                           "' has no pass");
                    return result;
                }
                material.techniques.push_back(std::move(technique));
            }
            if (material.techniques.empty()) {
                result.diags.error(block.line, block.column, "empty-material",
                                   "material '" + material.name + "' has no technique");
                return result;
            }
            entries.push_back(std::move(material));
        } else if (block.keyword == "hlms") {
            HlmsMaterial material;
            material.name = block.name;
            if (block.modifiers.empty()) {
                result.diags.error(block.line, block.column, "script-syntax",
                                   "hlms block '" + material.name +
                                       "' is missing the shader type modifier");
                return result;
            }
            material.shader_type = block.modifiers[0];
            for (const ScriptProperty& prop : block.properties) {
                bool duplicate = std::any_of(material.properties.begin(),
                                             material.properties.end(),
                                             [&](const ScriptProperty& p) {
                                                 return p.key == prop.key;
                                             });
                if (duplicate) {
                    result.diags.error(block.line, block.column, "duplicate-property",
                                       "hlms block '" + material.name +
                                           "' repeats property '" + prop.key + "'");
                    return result;
                }
                material.properties.push_back(prop);
            }
            for (const ScriptBlock& child : block.children)
                result.diags.warning(child.line, child.column, "unknown-block",
                                     "block '" + child.keyword + "' inside hlms ignored");
            entries.push_back(std::move(material));
        } else {
            result.diags.warning(block.line, block.column, "unknown-block",
                                 "top-level block '" + block.keyword + "' ignored");
        }
    }
    result.value = std::move(entries);
    return result;
}

namespace {

std::string format_color(const Eigen::Vector3d& c) {
    return format_double(c.x()) + " " + format_double(c.y()) + " " + format_double(c.z());
}

void serialize_pass(const OgrePass& pass, std::string& out) {
    out += "    pass {\n";
    auto prop = [&](std::string_view key, const std::string& values) {
        out += "      ";
        out += key;
        out += " " + values + "\n";
    };
    if (pass.ambient)
        prop("ambient", format_color(*pass.ambient));
    if (pass.diffuse) {
        std::string v = format_color(*pass.diffuse);
        if (pass.diffuse_alpha)
            v += " " + format_double(*pass.diffuse_alpha);
        prop("diffuse", v);
    }
    if (pass.specular)
        prop("specular", format_color(*pass.specular) + " " + format_double(pass.shininess));
    if (pass.emissive)
        prop("emissive", format_color(*pass.emissive));
    if (pass.scene_blend)
        prop("scene_blend", *pass.scene_blend);
    for (const ScriptProperty& extra : pass.extra) {
        std::string v;
        for (const std::string& token : extra.values) {
            if (!v.empty())
                v += " ";
            v += quoted_if_needed(token);
        }
        prop(extra.key, v);
    }
    for (const std::string& texture : pass.texture_units) {
        out += "      texture_unit {\n";
        out += "        texture " + quoted_if_needed(texture) + "\n";
        out += "      }\n";
    }
    out += "    }\n";
}

} // namespace

std::string serialize_material_script(const std::vector<MaterialEntry>& entries) {
    std::string out;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i > 0)
            out += "\n";
        if (const OgreMaterial* material = std::get_if<OgreMaterial>(&entries[i])) {
            out += "material " + quoted_if_needed(material->name) + " {\n";
            for (const OgreTechnique& technique : material->techniques) {
                out += "  technique {\n";
                for (const OgrePass& pass : technique.passes)
                    serialize_pass(pass, out);
                out += "  }\n";
            }
            out += "}\n";
        } else {
            const HlmsMaterial& hlms = std::get<HlmsMaterial>(entries[i]);
            out += "hlms " + quoted_if_needed(hlms.name) + " " +
                   quoted_if_needed(hlms.shader_type) + " {\n";
            for (const ScriptProperty& prop : hlms.properties) {
                out += "  " + prop.key;
                for (const std::string& v : prop.values)
                    out += " " + quoted_if_needed(v);
                out += "\n";
            }
            out += "}\n";
        }
    }
    return out;
}

bool material_entry_equal(const MaterialEntry& a, const MaterialEntry& b) {
    auto color_equal = [](const std::optional<Eigen::Vector3d>& x,
                          const std::optional<Eigen::Vector3d>& y) {
        if (x.has_value() != y.has_value())
            return false;
        return !x || (x->x() == y->x() && x->y() == y->y() && x->z() == y->z());
    };
    if (a.index() != b.index())
        return false;
    if (const OgreMaterial* ma = std::get_if<OgreMaterial>(&a)) {
        const OgreMaterial& mb = std::get<OgreMaterial>(b);
        if (ma->name != mb.name || ma->techniques.size() != mb.techniques.size())
            return false;
        for (size_t t = 0; t < ma->techniques.size(); ++t) {
            const auto& ta = ma->techniques[t];
            const auto& tb = mb.techniques[t];
            if (ta.passes.size() != tb.passes.size())
                return false;
            for (size_t p = 0; p < ta.passes.size(); ++p) {
                const OgrePass& x = ta.passes[p];
                const OgrePass& y = tb.passes[p];
                if (!color_equal(x.ambient, y.ambient) || !color_equal(x.diffuse, y.diffuse) ||
                    x.diffuse_alpha != y.diffuse_alpha ||
                    !color_equal(x.specular, y.specular) ||
                    !color_equal(x.emissive, y.emissive) || x.scene_blend != y.scene_blend ||
                    x.texture_units != y.texture_units || x.extra != y.extra)
                    return false;
                if (x.specular && x.shininess != y.shininess)
                    return false;
            }
        }
        return true;
    }
    const HlmsMaterial& ha = std::get<HlmsMaterial>(a);
    const HlmsMaterial& hb = std::get<HlmsMaterial>(b);
    return ha.name == hb.name && ha.shader_type == hb.shader_type &&
           ha.properties == hb.properties;
}

namespace {

bool parse_target_block(const ScriptBlock& block, TargetBlock& target, DiagnosticList& diags) {
    target.target_name = block.keyword == "target" ? block.name : "";
    for (const ScriptProperty& prop : block.properties) {
        if (prop.key == "input") {
            if (prop.values.size() != 1 ||
                (prop.values[0] != "none" && prop.values[0] != "previous")) {
                diags.error(block.line, block.column, "bad-input",
                            "target input must be 'none' or 'previous'");
                return false;
            }
            target.input_mode = prop.values[0] == "previous" ? CompositorInput::Previous
                                                             : CompositorInput::None;
        } else {
            diags.warning(block.line, block.column, "unknown-property",
                          "target property '" + prop.key + "' ignored");
        }
    }
    for (const ScriptBlock& pass_block : block.children) {
        if (pass_block.keyword != "pass") {
            diags.warning(pass_block.line, pass_block.column, "unknown-block",
                          "block '" + pass_block.keyword + "' inside target ignored");
            continue;
        }
        CompositorScriptPass pass;
        if (pass_block.name == "render_quad")
            pass.kind = CompositorPassKind::RenderQuad;
        else if (pass_block.name == "render_scene")
            pass.kind = CompositorPassKind::RenderScene;
        else {
            diags.error(pass_block.line, pass_block.column, "unsupported-pass",
                        "pass kind '" + pass_block.name +
                            "' is outside the render_quad/render_scene subset");
            return false;
        }
        for (const ScriptProperty& prop : pass_block.properties) {
            if (prop.key == "material") {
                if (!prop.values.empty())
                    pass.material = prop.values[0];
            } else if (prop.key == "input") {
                if (prop.values.size() != 2) {
                    diags.error(pass_block.line, pass_block.column, "bad-input",
                                "pass input needs a slot index and a texture name");
                    return false;
                }
                std::optional<long long> slot = parse_int(prop.values[0]);
                if (!slot || *slot < 0) {
                    diags.error(pass_block.line, pass_block.column, "bad-input",
                                "pass input slot must be a nonnegative integer");
                    return false;
                }
                int slot_index = static_cast<int>(*slot);
                bool duplicate = std::any_of(pass.inputs.begin(), pass.inputs.end(),
                                             [&](const auto& entry) {
                                                 return entry.first == slot_index;
                                             });
                if (duplicate) {
                    diags.error(pass_block.line, pass_block.column, "duplicate-slot",
                                "pass input slot " + prop.values[0] + " is assigned twice");
                    return false;
                }
                pass.inputs.emplace_back(slot_index, prop.values[1]);
            } else {
                diags.warning(pass_block.line, pass_block.column, "unknown-property",
                              "pass property '" + prop.key + "' ignored");
            }
        }
        target.passes.push_back(std::move(pass));
    }
    return true;
}

} // namespace

Result<std::vector<CompositorScript>> parse_compositor_script(std::string_view bytes) {
    Result<std::vector<CompositorScript>> result;
    Result<std::vector<ScriptBlock>> blocks = parse_script_blocks(bytes);
    result.diags.merge(blocks.diags);
    if (!blocks.ok())
        return result;

    std::vector<CompositorScript> scripts;
    for (const ScriptBlock& block : *blocks.value) {
        if (block.keyword != "compositor") {
            result.diags.warning(block.line, block.column, "unknown-block",
                                 "top-level block '" + block.keyword + "' ignored");
            continue;
        }
        CompositorScript script;
        script.name = block.name;
        for (const ScriptBlock& tech_block : block.children) {
            if (tech_block.keyword != "technique") {
                result.diags.warning(tech_block.line, tech_block.column, "unknown-block",
                                     "block '" + tech_block.keyword +
                                         "' inside compositor ignored");
                continue;
            }
            CompositorTechnique technique;
            bool have_output = false;
            for (const ScriptProperty& prop : tech_block.properties) {
                if (prop.key != "texture") {
                    result.diags.warning(tech_block.line, tech_block.column, "unknown-property",
                                         "technique property '" + prop.key + "' ignored");
                    continue;
                }
                if (prop.values.size() != 4) {
                    result.diags.error(tech_block.line, tech_block.column, "script-syntax",
                                       "texture declaration needs name, width, height and "
                                       "pixel format");
                    return result;
                }
                technique.textures.push_back(
                    {prop.values[0], prop.values[1], prop.values[2], prop.values[3]});
            }
            for (const ScriptBlock& child : tech_block.children) {
                if (child.keyword == "target") {
                    TargetBlock target;
                    if (!parse_target_block(child, target, result.diags))
                        return result;
                    technique.targets.push_back(std::move(target));
                } else if (child.keyword == "target_output") {
                    if (have_output) {
                        result.diags.error(child.line, child.column, "duplicate-output",
                                           "compositor '" + script.name +
                                               "' has more than one target_output");
                        return result;
                    }
                    if (!parse_target_block(child, technique.output, result.diags))
                        return result;
                    have_output = true;
                } else {
                    result.diags.warning(child.line, child.column, "unknown-block",
                                         "block '" + child.keyword +
                                             "' inside technique ignored");
                }
            }
            if (!have_output) {
                result.diags.error(tech_block.line, tech_block.column, "missing-output",
                                   "compositor '" + script.name + "' has no target_output");
                return result;
            }
            script.techniques.push_back(std::move(technique));
        }
        scripts.push_back(std::move(script));
    }
    result.value = std::move(scripts);
    return result;
}

namespace {

void serialize_target(const TargetBlock& target, bool is_output, std::string& out) {
    if (is_output)
        out += "    target_output {\n";
    else
        out += "    target " + quoted_if_needed(target.target_name) + " {\n";
    out += target.input_mode == CompositorInput::Previous ? "      input previous\n"
                                                          : "      input none\n";
    for (const CompositorScriptPass& pass : target.passes) {
        out += "      pass ";
        out += pass.kind == CompositorPassKind::RenderQuad ? "render_quad" : "render_scene";
        out += " {\n";
        if (!pass.material.empty())
            out += "        material " + quoted_if_needed(pass.material) + "\n";
        for (const auto& [slot, texture] : pass.inputs)
            out += "        input " + std::to_string(slot) + " " + quoted_if_needed(texture) +
                   "\n";
        out += "      }\n";
    }
    out += "    }\n";
}

} // namespace

std::string serialize_compositor_script(const std::vector<CompositorScript>& scripts) {
    std::string out;
    for (size_t i = 0; i < scripts.size(); ++i) {
        if (i > 0)
            out += "\n";
        const CompositorScript& script = scripts[i];
        out += "compositor " + quoted_if_needed(script.name) + " {\n";
        for (const CompositorTechnique& technique : script.techniques) {
            out += "  technique {\n";
            for (const CompositorTexture& texture : technique.textures)
                out += "    texture " + quoted_if_needed(texture.name) + " " +
                       texture.width_spec + " " + texture.height_spec + " " + texture.format +
                       "\n";
            for (const TargetBlock& target : technique.targets)
                serialize_target(target, false, out);
            serialize_target(technique.output, true, out);
            out += "  }\n";
        }
        out += "}\n";
    }
    return out;
}

} // namespace x3db
