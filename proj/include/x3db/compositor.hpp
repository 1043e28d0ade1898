#pragma once

// Render-target graph behind the Compositor/CompositorPass/CompositorOutput
// extension nodes. Pass order is authored document order; validation proves
// the stated order writes every texture before it is read and marks exactly
// one sink. Translates to and from .compositor scripts.

#include <optional>
#include <string>
#include <vector>

#include "x3db/diagnostics.hpp"
#include "x3db/registry.hpp"
#include "x3db/script.hpp"
#include "x3db/x3d.hpp"

namespace x3db {

enum class PassRender { Scene, Quad };

struct CompositorPassIR {
    std::string target; // render-texture name, empty for the output pass
    CompositorInput input_mode = CompositorInput::None;
    PassRender render = PassRender::Scene;
    std::string material; // shader or external material name, empty for Scene
    std::vector<std::string> reads; // input texture names in slot order
    int line = 0;
    int column = 0;
};

struct CompositorGraph {
    std::string name;
    std::vector<CompositorTexture> textures;
    std::vector<CompositorPassIR> passes;
    CompositorPassIR output;
};

/// Builds a graph from a Compositor node: RenderedTexture children declare
/// intermediate targets (dimensions/format attributes override the
/// target-sized PF_A8R8G8B8 default), CompositorPass children the passes,
/// CompositorOutput the sink.
Result<CompositorGraph> build_compositor(const X3dNode& node);

/// Verifies document order: every read texture written earlier, no double
/// writes, no self reads. Returns the pass labels (target names, then
/// "output") in execution order. Never reorders.
Result<std::vector<std::string>> validate_and_schedule(const CompositorGraph& graph);

/// Topological order over the write/read dependencies, document order among
/// ready passes, output last. Empty when the graph has no valid order.
std::optional<std::vector<std::string>> suggest_order(const CompositorGraph& graph);

Result<CompositorScript> to_ogre_compositor(const CompositorGraph& graph);
Result<CompositorGraph> from_ogre_compositor(const CompositorScript& script);

/// Scene passes keep rendering the scene regardless of the recorded input
/// mode, so comparisons may treat their input modes as equivalent.
bool compositor_graph_equal(const CompositorGraph& a, const CompositorGraph& b,
                            bool scene_input_insensitive = false);

struct ChainEntry {
    std::string name;
    bool internal = false; // resolved to an in-document Compositor DEF
};

struct CompositorChain {
    std::string viewpoint; // DEF of the Viewpoint, may be empty
    std::vector<ChainEntry> entries;
};

/// Resolves the Viewpoint `compositors` MFString, in-document DEFs first,
/// then the registry. Chain order is semantic: entry k reads entry k-1's
/// output, entry 0 the rendered scene.
Result<CompositorChain> resolve_chain(const X3dNode& viewpoint, const SceneDocument& doc,
                                      const ResourceRegistry& registry);

} // namespace x3db
