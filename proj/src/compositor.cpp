#include "x3db/compositor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "diagnostics_impl.hpp"

namespace x3db {

namespace {

constexpr std::string_view kDefaultFormat = "PF_A8R8G8B8";

std::optional<CompositorInput> parse_input_attr(const X3dNode& node, DiagnosticList& diags) {
    const std::string* raw = node.attribute("input");
    if (!raw || *raw == "none")
        return CompositorInput::None;
    if (*raw == "previous")
        return CompositorInput::Previous;
    diags.error(node.line, node.column, "bad-input",
                "input must be 'none' or 'previous', not '" + *raw + "'");
    return std::nullopt;
}

std::optional<PassRender> parse_render_attr(const X3dNode& node, DiagnosticList& diags) {
    const std::string* raw = node.attribute("render");
    if (!raw || *raw == "SCENE")
        return PassRender::Scene;
    if (*raw == "QUAD")
        return PassRender::Quad;
    diags.error(node.line, node.column, "bad-render",
                "render must be 'SCENE' or 'QUAD', not '" + *raw + "'");
    return std::nullopt;
}

bool fill_quad_appearance(const X3dNode& pass_node, CompositorPassIR& pass,
                          DiagnosticList& diags) {
    const X3dNode* appearance = nullptr;
    for (const X3dNode& child : pass_node.children)
        if (child.kind == NodeKind::Appearance || child.kind == NodeKind::CustomAppearance) {
            appearance = &child;
            break;
        }
    if (!appearance) {
        diags.error(pass_node.line, pass_node.column, "unresolved-material",
                    "QUAD pass needs an Appearance naming its shader");
        return false;
    }
    for (const X3dNode& child : appearance->children) {
        if (child.kind == NodeKind::ComposedShader) {
            pass.material = child.is_use() ? child.use_name : child.def_name;
        } else if (child.kind == NodeKind::RenderedTexture && child.is_use()) {
            pass.reads.push_back(child.use_name);
        }
    }
    if (pass.material.empty()) {
        diags.error(appearance->line, appearance->column, "unresolved-material",
                    "QUAD pass appearance does not name a ComposedShader");
        return false;
    }
    return true;
}

std::optional<CompositorPassIR> build_pass(const X3dNode& node, bool is_output,
                                           DiagnosticList& diags) {
    CompositorPassIR pass;
    pass.line = node.line;
    pass.column = node.column;
    if (!is_output) {
        const std::string* target = node.attribute("target");
        if (!target || target->empty()) {
            diags.error(node.line, node.column, "missing-target",
                        "CompositorPass needs a target render texture");
            return std::nullopt;
        }
        pass.target = *target;
    }
    auto input = parse_input_attr(node, diags);
    auto render = parse_render_attr(node, diags);
    if (!input || !render)
        return std::nullopt;
    pass.input_mode = *input;
    pass.render = *render;
    if (pass.render == PassRender::Quad) {
        if (!fill_quad_appearance(node, pass, diags))
            return std::nullopt;
    } else {
        for (const X3dNode& child : node.children)
            if (child.kind == NodeKind::Appearance || child.kind == NodeKind::CustomAppearance) {
                diags.error(child.line, child.column, "bad-render",
                            "SCENE pass must not carry an appearance");
                return std::nullopt;
            }
    }
    return pass;
}

} // namespace

Result<CompositorGraph> build_compositor(const X3dNode& node) {
    Result<CompositorGraph> result;
    if (node.kind != NodeKind::Compositor) {
        result.diags.error(node.line, node.column, "unknown-node",
                           "expected a Compositor node");
        return result;
    }
    CompositorGraph graph;
    graph.name = node.def_name;
    bool have_output = false;
    for (const X3dNode& child : node.children) {
        if (child.kind == NodeKind::RenderedTexture && !child.is_use()) {
            if (child.def_name.empty()) {
                result.diags.error(child.line, child.column, "bad-field",
                                   "RenderedTexture inside Compositor needs a DEF name");
                return result;
            }
            CompositorTexture texture;
            texture.name = child.def_name;
            texture.width_spec = "target_width";
            texture.height_spec = "target_height";
            texture.format = std::string(kDefaultFormat);
            std::vector<double> dims = attr_floats(child, "dimensions");
            if (dims.size() >= 2) {
                texture.width_spec = std::to_string(static_cast<long long>(dims[0]));
                texture.height_spec = std::to_string(static_cast<long long>(dims[1]));
            }
            if (const std::string* format = child.attribute("format"))
                texture.format = *format;
            graph.textures.push_back(std::move(texture));
        } else if (child.kind == NodeKind::CompositorPass) {
            auto pass = build_pass(child, false, result.diags);
            if (!pass)
                return result;
            graph.passes.push_back(std::move(*pass));
        } else if (child.kind == NodeKind::CompositorOutput) {
            if (have_output) {
                result.diags.error(child.line, child.column, "duplicate-output",
                                   "Compositor '" + graph.name +
                                       "' has more than one CompositorOutput");
                return result;
            }
            auto pass = build_pass(child, true, result.diags);
            if (!pass)
                return result;
            graph.output = std::move(*pass);
            have_output = true;
        } else {
            result.diags.warning(child.line, child.column, "unknown-node",
                                 "node inside Compositor ignored");
        }
    }
    if (!have_output) {
        result.diags.error(node.line, node.column, "missing-output",
                           "Compositor '" + graph.name + "' has no CompositorOutput");
        return result;
    }
    result.value = std::move(graph);
    return result;
}

namespace {

struct ScheduleChecker {
    const CompositorGraph& graph;
    DiagnosticList& diags;
    std::set<std::string> declared;
    std::set<std::string> written;

    bool check_pass(const CompositorPassIR& pass, const std::string& label, size_t index) {
        for (const std::string& read : pass.reads) {
            if (read == pass.target) {
                diags.error(pass.line, pass.column, "rt-self-read",
                            "pass " + std::to_string(index) + " (" + label +
                                ") reads its own target '" + read + "'");
                return false;
            }
            if (!declared.count(read)) {
                diags.error(pass.line, pass.column, "unknown-texture",
                            "pass " + std::to_string(index) + " (" + label +
                                ") reads undeclared texture '" + read + "'");
                return false;
            }
            if (!written.count(read)) {
                diags.error(pass.line, pass.column, "rt-read-before-write",
                            "texture '" + read + "' is read by pass " + std::to_string(index) +
                                " (" + label + ") before any pass writes it");
                return false;
            }
        }
        if (!pass.target.empty()) {
            if (!declared.count(pass.target)) {
                diags.error(pass.line, pass.column, "unknown-texture",
                            "pass " + std::to_string(index) + " writes undeclared texture '" +
                                pass.target + "'");
                return false;
            }
            if (written.count(pass.target)) {
                diags.error(pass.line, pass.column, "rt-double-write",
                            "texture '" + pass.target + "' is written twice");
                return false;
            }
            written.insert(pass.target);
        }
        return true;
    }
};

} // namespace

Result<std::vector<std::string>> validate_and_schedule(const CompositorGraph& graph) {
    Result<std::vector<std::string>> result;
    ScheduleChecker checker{graph, result.diags, {}, {}};
    for (const CompositorTexture& texture : graph.textures)
        checker.declared.insert(texture.name);

    std::vector<std::string> order;
    for (size_t i = 0; i < graph.passes.size(); ++i) {
        const CompositorPassIR& pass = graph.passes[i];
        if (!checker.check_pass(pass, pass.target, i))
            return result;
        order.push_back(pass.target);
    }
    if (!checker.check_pass(graph.output, "output", graph.passes.size()))
        return result;
    order.push_back("output");
    result.value = std::move(order);
    return result;
}

std::optional<std::vector<std::string>> suggest_order(const CompositorGraph& graph) {
    std::map<std::string, size_t> writer;
    std::set<std::string> declared;
    for (const CompositorTexture& texture : graph.textures)
        declared.insert(texture.name);
    for (size_t i = 0; i < graph.passes.size(); ++i) {
        const CompositorPassIR& pass = graph.passes[i];
        if (pass.target.empty() || !declared.count(pass.target) || writer.count(pass.target))
            return std::nullopt;
        writer[pass.target] = i;
    }

    size_t n = graph.passes.size();
    std::vector<std::vector<size_t>> before(n); // pass indices that must run first
    auto deps_ok = [&](const CompositorPassIR& pass, std::vector<size_t>& deps) {
        for (const std::string& read : pass.reads) {
            if (read == pass.target || !writer.count(read))
                return false;
            deps.push_back(writer.at(read));
        }
        return true;
    };
    for (size_t i = 0; i < n; ++i)
        if (!deps_ok(graph.passes[i], before[i]))
            return std::nullopt;
    std::vector<size_t> output_deps;
    if (!deps_ok(graph.output, output_deps))
        return std::nullopt;

    std::vector<std::string> order;
    std::vector<bool> done(n, false);
    for (size_t emitted = 0; emitted < n; ++emitted) {
        size_t pick = n;
        for (size_t i = 0; i < n && pick == n; ++i) {
            if (done[i])
                continue;
            bool ready = std::all_of(before[i].begin(), before[i].end(),
                                     [&](size_t d) { return done[d]; });
            if (ready)
                pick = i;
        }
        if (pick == n)
            return std::nullopt; // cyclic
        done[pick] = true;
        order.push_back(graph.passes[pick].target);
    }
    order.push_back("output");
    return order;
}

namespace {

TargetBlock target_from_pass(const CompositorPassIR& pass, DiagnosticList& diags, bool& ok) {
    TargetBlock block;
    block.target_name = pass.target;
    if (pass.render == PassRender::Scene) {
        // the scene (or the previous chain element) is rendered straight
        // into the target, which is what `input previous` does in OGRE
        block.input_mode = CompositorInput::Previous;
        return block;
    }
    block.input_mode = pass.input_mode;
    if (pass.material.empty()) {
        diags.error(pass.line, pass.column, "unresolved-material",
                    "QUAD pass has no material name to reference");
        ok = false;
        return block;
    }
    CompositorScriptPass script_pass;
    script_pass.kind = CompositorPassKind::RenderQuad;
    script_pass.material = pass.material;
    for (size_t slot = 0; slot < pass.reads.size(); ++slot)
        script_pass.inputs.emplace_back(static_cast<int>(slot), pass.reads[slot]);
    block.passes.push_back(std::move(script_pass));
    return block;
}

} // namespace

Result<CompositorScript> to_ogre_compositor(const CompositorGraph& graph) {
    Result<CompositorScript> result;
    CompositorScript script;
    script.name = graph.name;
    CompositorTechnique technique;
    technique.textures = graph.textures;
    bool ok = true;
    for (const CompositorPassIR& pass : graph.passes)
        technique.targets.push_back(target_from_pass(pass, result.diags, ok));
    technique.output = target_from_pass(graph.output, result.diags, ok);
    if (!ok)
        return result;
    script.techniques.push_back(std::move(technique));
    result.value = std::move(script);
    return result;
}

namespace {

void passes_from_target(const TargetBlock& block, std::vector<CompositorPassIR>& out) {
    if (block.passes.empty()) {
        CompositorPassIR pass;
        pass.target = block.target_name;
        pass.input_mode = block.input_mode;
        pass.render = PassRender::Scene;
        out.push_back(std::move(pass));
        return;
    }
    for (const CompositorScriptPass& script_pass : block.passes) {
        CompositorPassIR pass;
        pass.target = block.target_name;
        pass.input_mode = block.input_mode;
        pass.render = script_pass.kind == CompositorPassKind::RenderQuad ? PassRender::Quad
                                                                         : PassRender::Scene;
        if (pass.render == PassRender::Quad) {
            pass.material = script_pass.material;
            std::vector<std::pair<int, std::string>> inputs = script_pass.inputs;
            std::sort(inputs.begin(), inputs.end());
            for (const auto& [slot, texture] : inputs)
                pass.reads.push_back(texture);
        }
        out.push_back(std::move(pass));
    }
}

} // namespace

Result<CompositorGraph> from_ogre_compositor(const CompositorScript& script) {
    Result<CompositorGraph> result;
    if (script.techniques.empty()) {
        result.diags.error(0, 0, "missing-output",
                           "compositor '" + script.name + "' has no technique");
        return result;
    }
    if (script.techniques.size() > 1)
        result.diags.warning(0, 0, "technique-collapsed",
                             "compositor '" + script.name +
                                 "' has multiple techniques; only the first is mapped");
    const CompositorTechnique& technique = script.techniques.front();

    CompositorGraph graph;
    graph.name = script.name;
    graph.textures = technique.textures;
    for (const TargetBlock& block : technique.targets)
        passes_from_target(block, graph.passes);
    std::vector<CompositorPassIR> outputs;
    passes_from_target(technique.output, outputs);
    if (outputs.size() != 1) {
        result.diags.error(0, 0, "duplicate-output",
                           "compositor '" + script.name +
                               "' output block must map to exactly one pass");
        return result;
    }
    graph.output = std::move(outputs.front());
    result.value = std::move(graph);
    return result;
}

bool compositor_graph_equal(const CompositorGraph& a, const CompositorGraph& b,
                            bool scene_input_insensitive) {
    auto pass_equal = [&](const CompositorPassIR& x, const CompositorPassIR& y) {
        if (x.target != y.target || x.render != y.render || x.material != y.material ||
            x.reads != y.reads)
            return false;
        if (x.render == PassRender::Scene && scene_input_insensitive)
            return true;
        return x.input_mode == y.input_mode;
    };
    if (a.name != b.name || a.textures != b.textures || a.passes.size() != b.passes.size())
        return false;
    for (size_t i = 0; i < a.passes.size(); ++i)
        if (!pass_equal(a.passes[i], b.passes[i]))
            return false;
    return pass_equal(a.output, b.output);
}

Result<CompositorChain> resolve_chain(const X3dNode& viewpoint, const SceneDocument& doc,
                                      const ResourceRegistry& registry) {
    Result<CompositorChain> result;
    CompositorChain chain;
    chain.viewpoint = viewpoint.def_name;
    const std::string* attr = viewpoint.attribute("compositors");
    if (attr) {
        for (const std::string& name : parse_mfstring(*attr)) {
            const X3dNode* def = doc.find_def(name);
            if (def && def->kind == NodeKind::Compositor) {
                chain.entries.push_back({name, true});
            } else if (registry.compositor_names.count(name)) {
                chain.entries.push_back({name, false});
            } else {
                result.diags.error(viewpoint.line, viewpoint.column, "unknown-compositor",
                                   "compositor '" + name +
                                       "' resolves neither to a DEF nor to a registry resource");
                return result;
            }
        }
    }
    result.value = std::move(chain);
    return result;
}

} // namespace x3db
