#pragma once

// Compositional ROUTE rewriting: supported event wires are replaced by a USE
// reference to the source node nested under the target node, so playback
// needs no event cascade.

#include <vector>

#include "x3db/x3d.hpp"

namespace x3db {

struct RoutePattern {
    enum class KindSelector { Exact, AnyInterpolator, Any };

    KindSelector from_selector = KindSelector::Exact;
    NodeKind from_kind = NodeKind::Unknown;
    std::string from_field;
    KindSelector to_selector = KindSelector::Exact;
    NodeKind to_kind = NodeKind::Unknown;
    std::string to_field; // empty matches any target field

    bool matches(NodeKind from, const std::string& from_f, NodeKind to,
                 const std::string& to_f) const;
};

/// TimeSensor→interpolator fraction wiring plus the interpolator value
/// targets; user code may extend the table.
const std::vector<RoutePattern>& default_route_patterns();

/// Deletes every pattern-matching ROUTE and appends a USE reference to the
/// source node as a child of the target node. Unmatched ROUTEs stay and warn
/// `route-unsupported`; undefined DEF names error. Idempotent.
SceneDocument rewrite_routes(SceneDocument doc,
                             const std::vector<RoutePattern>& patterns = default_route_patterns());

} // namespace x3db
