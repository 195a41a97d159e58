#ifndef PARCEL_MESH_HPP
#define PARCEL_MESH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace parcel {

// Triangulated surface. Positions in mm, triangles as 0-based vertex index
// triples. Isolated vertices are allowed; validate() flags them.
struct SurfaceMesh {
    std::vector<std::array<double, 3>> vertex_positions;
    std::vector<std::array<uint32_t, 3>> triangles;

    std::size_t n_vertices() const { return vertex_positions.size(); }
    std::size_t n_triangles() const { return triangles.size(); }
};

struct MeshValidation {
    bool ok = true;
    std::vector<uint32_t> isolated_vertices; // no incident triangle
    std::string message;                     // set when !ok
};

// Undirected vertex adjacency from shared triangle edges.
struct AdjacencyGraph {
    std::vector<std::vector<uint32_t>> neighbors; // sorted, unique, no self-loops

    std::size_t n_vertices() const { return neighbors.size(); }
};

using VertexMask = std::vector<bool>; // length n_vertices, true = keep

struct SubmeshResult {
    SurfaceMesh mesh;
    std::vector<int64_t> old_to_new; // -1 for excluded vertices
    std::vector<uint32_t> new_to_old;
};

// Checks index ranges and triangle non-degeneracy; collects isolated vertices.
// Structural failures throw; isolated vertices only set the warning list.
MeshValidation validate_mesh(const SurfaceMesh& mesh);

AdjacencyGraph build_adjacency(const SurfaceMesh& mesh);

// Barycentric lumping: each triangle contributes a third of its area to each
// corner. Sum over vertices equals total surface area.
std::vector<double> vertex_areas(const SurfaceMesh& mesh);

double triangle_area(const SurfaceMesh& mesh, std::size_t t);

// Keeps vertices with mask=true and triangles whose three corners survive.
SubmeshResult induced_submesh(const SurfaceMesh& mesh, const VertexMask& mask);

// Graph connectivity over the included vertices (all vertices if mask empty).
bool is_connected(const AdjacencyGraph& graph);
std::vector<uint32_t> connected_component_of(const AdjacencyGraph& graph, uint32_t start);

} // namespace parcel

#endif
