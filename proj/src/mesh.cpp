#include "parcel/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "parcel/errors.hpp"

namespace parcel {

MeshValidation validate_mesh(const SurfaceMesh& mesh) {
    const std::size_t n = mesh.n_vertices();
    std::vector<bool> touched(n, false);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (uint32_t idx : tri) {
            if (idx >= n)
                throw format_error("triangle " + std::to_string(t) +
                                   " references vertex " + std::to_string(idx) +
                                   " out of range [0," + std::to_string(n) + ")");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw format_error("triangle " + std::to_string(t) +
                               " is degenerate (repeated vertex index)");
        touched[tri[0]] = touched[tri[1]] = touched[tri[2]] = true;
    }
    MeshValidation v;
    for (std::size_t i = 0; i < n; ++i)
        if (!touched[i]) v.isolated_vertices.push_back(static_cast<uint32_t>(i));
    return v;
}

AdjacencyGraph build_adjacency(const SurfaceMesh& mesh) {
    validate_mesh(mesh);
    AdjacencyGraph g;
    g.neighbors.resize(mesh.n_vertices());
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            uint32_t a = tri[e], b = tri[(e + 1) % 3];
            g.neighbors[a].push_back(b);
            g.neighbors[b].push_back(a);
        }
    }
    for (auto& nb : g.neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return g;
}

double triangle_area(const SurfaceMesh& mesh, std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertex_positions[tri[0]];
    const auto& p1 = mesh.vertex_positions[tri[1]];
    const auto& p2 = mesh.vertex_positions[tri[2]];
    double ux = p1[0] - p0[0], uy = p1[1] - p0[1], uz = p1[2] - p0[2];
    double vx = p2[0] - p0[0], vy = p2[1] - p0[1], vz = p2[2] - p0[2];
    double cx = uy * vz - uz * vy;
    double cy = uz * vx - ux * vz;
    double cz = ux * vy - uy * vx;
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

std::vector<double> vertex_areas(const SurfaceMesh& mesh) {
    validate_mesh(mesh);
    std::vector<double> areas(mesh.n_vertices(), 0.0);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        double third = triangle_area(mesh, t) / 3.0;
        for (uint32_t idx : mesh.triangles[t]) areas[idx] += third;
    }
    return areas;
}

SubmeshResult induced_submesh(const SurfaceMesh& mesh, const VertexMask& mask) {
    if (mask.size() != mesh.n_vertices())
        throw parameter_error("mask length " + std::to_string(mask.size()) +
                              " does not match vertex count " +
                              std::to_string(mesh.n_vertices()));
    SubmeshResult out;
    out.old_to_new.assign(mesh.n_vertices(), -1);
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
        if (mask[i]) {
            out.old_to_new[i] = static_cast<int64_t>(out.new_to_old.size());
            out.new_to_old.push_back(static_cast<uint32_t>(i));
            out.mesh.vertex_positions.push_back(mesh.vertex_positions[i]);
        }
    }
    if (out.new_to_old.empty())
        throw constraint_error("mask excludes every vertex (empty domain)");
    for (const auto& tri : mesh.triangles) {
        if (mask[tri[0]] && mask[tri[1]] && mask[tri[2]]) {
            out.mesh.triangles.push_back(
                {static_cast<uint32_t>(out.old_to_new[tri[0]]),
                 static_cast<uint32_t>(out.old_to_new[tri[1]]),
                 static_cast<uint32_t>(out.old_to_new[tri[2]])});
        }
    }
    return out;
}

std::vector<uint32_t> connected_component_of(const AdjacencyGraph& graph, uint32_t start) {
    std::vector<bool> seen(graph.n_vertices(), false);
    std::deque<uint32_t> queue{start};
    seen[start] = true;
    std::vector<uint32_t> component;
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        component.push_back(v);
        for (uint32_t w : graph.neighbors[v]) {
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    std::sort(component.begin(), component.end());
    return component;
}

bool is_connected(const AdjacencyGraph& graph) {
    if (graph.n_vertices() == 0) return true;
    return connected_component_of(graph, 0).size() == graph.n_vertices();
}

} // namespace parcel
