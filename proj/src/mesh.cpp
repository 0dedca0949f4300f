// SPDX-License-Identifier: Apache-2.0
#include <tvf/mesh.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace tvf {

namespace {

std::uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

} // namespace

int EdgeTopology::num_boundary_edges() const
{
    return static_cast<int>(std::count_if(
        edge_triangles.begin(), edge_triangles.end(), [](const auto& t) { return t[1] < 0; }));
}

double triangle_area(const TriangleMesh& mesh, int tri)
{
    const Vec3<double> a = mesh.corner(tri, 0);
    const Vec3<double> b = mesh.corner(tri, 1);
    const Vec3<double> c = mesh.corner(tri, 2);
    return 0.5 * (b - a).cross(c - a).norm();
}

double total_area(const TriangleMesh& mesh)
{
    double area = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) area += triangle_area(mesh, t);
    return area;
}

double mean_edge_length(const TriangleMesh& mesh)
{
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) sum += (mesh.corner(t, (k + 1) % 3) - mesh.corner(t, k)).norm();
    }
    return mesh.num_triangles() > 0 ? sum / (3.0 * mesh.num_triangles()) : 0.0;
}

EdgeTopology build_edges(const TriangleMesh& mesh)
{
    EdgeTopology topo;
    std::unordered_map<std::uint64_t, int> lookup;
    lookup.reserve(static_cast<size_t>(mesh.num_triangles()) * 2);
    // Directed-edge ownership: first triangle traversing the edge as (a,b).
    std::vector<std::array<int, 2>> first_direction;

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.triangles(t, k);
            const int b = mesh.triangles(t, (k + 1) % 3);
            if (a == b) {
                std::ostringstream msg;
                msg << "triangle " << t << " repeats vertex " << a;
                throw TopologyError(msg.str());
            }
            auto [it, inserted] = lookup.try_emplace(edge_key(a, b), topo.num_edges());
            if (inserted) {
                topo.edges.push_back({std::min(a, b), std::max(a, b)});
                topo.edge_triangles.push_back({t, -1});
                first_direction.push_back({a, b});
                continue;
            }
            const int e = it->second;
            if (topo.edge_triangles[e][1] >= 0) {
                std::ostringstream msg;
                msg << "non-manifold edge (" << a << ", " << b << ") shared by more than two triangles";
                throw TopologyError(msg.str());
            }
            if (first_direction[e][0] == a && first_direction[e][1] == b) {
                std::ostringstream msg;
                msg << "inconsistent orientation across edge (" << a << ", " << b << ") between triangles "
                    << topo.edge_triangles[e][0] << " and " << t;
                throw TopologyError(msg.str());
            }
            topo.edge_triangles[e][1] = t;
        }
    }
    return topo;
}

void validate(const TriangleMesh& mesh, bool allow_boundary)
{
    const int nv = mesh.num_vertices();
    if (mesh.num_triangles() == 0) throw TopologyError("mesh has no triangles");
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int v = mesh.triangles(t, k);
            if (v < 0 || v >= nv) {
                std::ostringstream msg;
                msg << "triangle " << t << " references vertex " << v << " outside [0, " << nv << ")";
                throw TopologyError(msg.str());
            }
        }
    }
    const EdgeTopology topo = build_edges(mesh);
    if (!allow_boundary && topo.num_boundary_edges() > 0) {
        throw TopologyError("mesh has " + std::to_string(topo.num_boundary_edges()) + " boundary edges");
    }
    // Degeneracy is judged relative to the unit-area rescaled mesh.
    const double area = total_area(mesh);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        if (!(triangle_area(mesh, t) > kDegenerateArea * area)) {
            std::ostringstream msg;
            msg << "degenerate triangle " << t << " (area " << triangle_area(mesh, t) << ")";
            throw GeometryError(msg.str());
        }
    }
    std::vector<char> used(nv, 0);
    for (int t = 0; t < mesh.num_triangles(); ++t)
        for (int k = 0; k < 3; ++k) used[mesh.triangles(t, k)] = 1;
    for (int v = 0; v < nv; ++v) {
        if (!used[v]) throw GeometryError("isolated vertex " + std::to_string(v));
    }
}

bool is_closed(const TriangleMesh& mesh) { return build_edges(mesh).num_boundary_edges() == 0; }

int connected_components(const TriangleMesh& mesh)
{
    std::vector<int> parent(mesh.num_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<char> used(mesh.num_vertices(), 0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            used[mesh.triangles(t, k)] = 1;
            const int a = find(mesh.triangles(t, k));
            const int b = find(mesh.triangles(t, (k + 1) % 3));
            if (a != b) parent[a] = b;
        }
    }
    int count = 0;
    for (int v = 0; v < mesh.num_vertices(); ++v) count += (used[v] && find(v) == v) ? 1 : 0;
    return count;
}

int euler_characteristic(const TriangleMesh& mesh)
{
    return mesh.num_vertices() - build_edges(mesh).num_edges() + mesh.num_triangles();
}

int genus(const TriangleMesh& mesh)
{
    const EdgeTopology topo = build_edges(mesh);
    if (topo.num_boundary_edges() > 0) throw TopologyError("genus requires a closed mesh");
    if (connected_components(mesh) != 1) throw TopologyError("genus requires a connected mesh");
    const int chi = mesh.num_vertices() - topo.num_edges() + mesh.num_triangles();
    return (2 - chi) / 2;
}

OneRings one_rings(const TriangleMesh& mesh)
{
    const int nv = mesh.num_vertices();
    // For every vertex v, map ring vertex a -> b for each triangle (v, a, b).
    std::vector<std::vector<std::array<int, 2>>> wedges(nv);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            wedges[mesh.triangles(t, k)].push_back(
                {mesh.triangles(t, (k + 1) % 3), mesh.triangles(t, (k + 2) % 3)});
        }
    }
    OneRings out;
    out.rings.resize(nv);
    out.closed.assign(nv, true);
    for (int v = 0; v < nv; ++v) {
        auto& w = wedges[v];
        if (w.empty()) continue;
        std::unordered_map<int, int> next;
        std::unordered_map<int, int> incoming;
        for (const auto& [a, b] : w) {
            next[a] = b;
            ++incoming[b];
        }
        // Open rings start at the vertex with no predecessor.
        int start = w.front()[0];
        for (const auto& [a, b] : w) {
            if (!incoming.count(a)) {
                start = a;
                out.closed[v] = false;
                break;
            }
        }
        auto& ring = out.rings[v];
        int cur = start;
        for (size_t guard = 0; guard <= w.size(); ++guard) {
            ring.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
            if (cur == start) break;
        }
        if (ring.size() != w.size() + (out.closed[v] ? 0 : 1)) {
            throw TopologyError("vertex " + std::to_string(v) + " is non-manifold (fan not a single disk)");
        }
    }
    return out;
}

double min_normal_consistency(const OrientedMesh& om)
{
    double lowest = 1.0;
    const TriangleMesh& mesh = om.mesh;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec3<double> a = mesh.corner(t, 0);
        const Vec3<double> n = (mesh.corner(t, 1) - a).cross(mesh.corner(t, 2) - a).normalized();
        for (int k = 0; k < 3; ++k) lowest = std::min(lowest, n.dot(om.normal(mesh.triangles(t, k))));
    }
    return lowest;
}

void validate_normals(const OrientedMesh& om)
{
    if (om.normals.rows() != om.num_vertices()) throw GeometryError("normal count does not match vertex count");
    for (int v = 0; v < om.num_vertices(); ++v) {
        if (std::abs(om.normal(v).norm() - 1.0) > 1e-12) {
            throw GeometryError("normal " + std::to_string(v) + " is not unit length");
        }
    }
    const TriangleMesh& mesh = om.mesh;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Vec3<double> a = mesh.corner(t, 0);
        const Vec3<double> n = (mesh.corner(t, 1) - a).cross(mesh.corner(t, 2) - a).normalized();
        for (int k = 0; k < 3; ++k) {
            if (!(n.dot(om.normal(mesh.triangles(t, k))) > 0.0)) {
                std::ostringstream msg;
                msg << "vertex normal " << mesh.triangles(t, k) << " is inconsistent with the normal of triangle "
                    << t;
                throw GeometryError(msg.str());
            }
        }
    }
}

OrientedMesh rescale_unit_area(const OrientedMesh& om)
{
    const double area = total_area(om.mesh);
    if (!(area > 0.0)) throw GeometryError("cannot rescale a zero-area mesh");
    OrientedMesh out = om;
    out.mesh.vertices *= 1.0 / std::sqrt(area);
    return out;
}

std::vector<double> aspect_ratios(const TriangleMesh& mesh)
{
    std::vector<double> ratios(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        double longest = 0.0;
        for (int k = 0; k < 3; ++k) {
            longest = std::max(longest, (mesh.corner(t, (k + 1) % 3) - mesh.corner(t, k)).norm());
        }
        const double altitude = 2.0 * triangle_area(mesh, t) / longest;
        ratios[t] = longest / altitude * (std::sqrt(3.0) / 2.0);
    }
    return ratios;
}

std::vector<double> metric_condition_numbers(const TriangleMesh& mesh)
{
    std::vector<double> cond(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        Mat32<double> d;
        d.col(0) = mesh.corner(t, 1) - mesh.corner(t, 0);
        d.col(1) = mesh.corner(t, 2) - mesh.corner(t, 0);
        const Mat2<double> g = d.transpose() * d;
        const double tr = g.trace();
        const double det = g.determinant();
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        const double hi = tr / 2.0 + disc;
        const double lo = tr / 2.0 - disc;
        cond[t] = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    }
    return cond;
}

} // namespace tvf
