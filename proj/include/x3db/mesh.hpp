#pragma once

// Codec for the OGRE XML mesh format subset: submeshes, optional shared
// geometry, interleaved vertex buffers and triangle-list faces. The binary
// .mesh form is out of scope; bone assignment blocks are kept verbatim but
// never produced.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "x3db/diagnostics.hpp"

namespace x3db {

struct MeshVertex {
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    Eigen::Vector3d normal{0.0, 0.0, 0.0};
    std::vector<std::array<double, 2>> texcoords;
};

struct VertexBuffer {
    bool has_positions = false;
    bool has_normals = false;
    size_t texcoord_sets = 0;
    std::vector<MeshVertex> vertices;
};

struct VertexData {
    size_t vertex_count = 0;
    std::vector<VertexBuffer> buffers;
};

struct Submesh {
    std::string material;
    bool use_shared_vertices = false;
    std::string operation_type = "triangle_list";
    std::vector<std::array<uint32_t, 3>> faces;
    std::optional<VertexData> geometry;
    std::string bone_assignments_raw; // opaque passthrough, may be empty
};

struct OgreMesh {
    std::optional<VertexData> shared_geometry;
    std::vector<Submesh> submeshes;
    std::string bone_assignments_raw; // shared-geometry assignments
};

/// Parses and validates: count attributes against child counts, face indices
/// against the governing vertex count, operation types, shared-vertex
/// consistency and interleaved record shapes.
Result<OgreMesh> parse_mesh_xml(std::string_view bytes);

/// Canonical form: fixed attribute order, shortest round-trip floats,
/// 2-space indent. parse(serialize(m)) structurally equals m.
std::string serialize_mesh_xml(const OgreMesh& mesh);

bool mesh_equal(const OgreMesh& a, const OgreMesh& b);

} // namespace x3db
