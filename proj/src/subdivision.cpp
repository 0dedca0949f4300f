// SPDX-License-Identifier: Apache-2.0
#include <tvf/mesh.hpp>

#include <cstdint>
#include <unordered_map>

namespace tvf {

TriangleMesh loop_subdivide(const TriangleMesh& mesh)
{
    const EdgeTopology topo = build_edges(mesh);
    if (topo.num_boundary_edges() > 0) throw TopologyError("loop subdivision supports closed meshes only");

    const int nv = mesh.num_vertices();
    const int ne = topo.num_edges();
    TriangleMesh out;
    out.vertices.resize(nv + ne, 3);

    const OneRings rings = one_rings(mesh);
    for (int v = 0; v < nv; ++v) {
        const auto& ring = rings.rings[v];
        const int k = static_cast<int>(ring.size());
        const double beta = loop_beta(k);
        Eigen::RowVector3d p = (1.0 - k * beta) * mesh.vertices.row(v);
        for (int r : ring) p += beta * mesh.vertices.row(r);
        out.vertices.row(v) = p;
    }

    std::unordered_map<std::uint64_t, int> edge_index;
    edge_index.reserve(static_cast<size_t>(ne) * 2);
    auto key = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };
    for (int e = 0; e < ne; ++e) {
        const auto [a, b] = topo.edges[e];
        edge_index[key(a, b)] = nv + e;
        Eigen::RowVector3d p = 3.0 / 8.0 * (mesh.vertices.row(a) + mesh.vertices.row(b));
        for (int t : topo.edge_triangles[e]) {
            for (int k = 0; k < 3; ++k) {
                const int c = mesh.triangles(t, k);
                if (c != a && c != b) p += 1.0 / 8.0 * mesh.vertices.row(c);
            }
        }
        out.vertices.row(nv + e) = p;
    }

    out.triangles.resize(4 * mesh.num_triangles(), 3);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const int a = mesh.triangles(t, 0);
        const int b = mesh.triangles(t, 1);
        const int c = mesh.triangles(t, 2);
        const int ab = edge_index.at(key(a, b));
        const int bc = edge_index.at(key(b, c));
        const int ca = edge_index.at(key(c, a));
        out.triangles.row(4 * t + 0) << a, ab, ca;
        out.triangles.row(4 * t + 1) << ab, b, bc;
        out.triangles.row(4 * t + 2) << ca, bc, c;
        out.triangles.row(4 * t + 3) << ab, bc, ca;
    }
    return out;
}

OrientedMesh loop_subdivide(const OrientedMesh& mesh, NormalMode mode)
{
    OrientedMesh out;
    out.mesh = loop_subdivide(mesh.mesh);
    out.normals = compute_vertex_normals(out.mesh, mode);
    return out;
}

} // namespace tvf
