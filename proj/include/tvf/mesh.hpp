// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace tvf {

using PositionMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Vertex positions plus triangle index triples (counter-clockwise seen from
/// the outside).
struct TriangleMesh
{
    PositionMatrix vertices;
    IndexMatrix triangles;

    int num_vertices() const { return static_cast<int>(vertices.rows()); }
    int num_triangles() const { return static_cast<int>(triangles.rows()); }

    Vec3<double> corner(int tri, int k) const { return vertices.row(triangles(tri, k)).transpose(); }
};

/// A triangle mesh with a unit normal at every vertex.
struct OrientedMesh
{
    TriangleMesh mesh;
    PositionMatrix normals;

    int num_vertices() const { return mesh.num_vertices(); }
    int num_triangles() const { return mesh.num_triangles(); }
    Vec3<double> normal(int v) const { return normals.row(v).transpose(); }
};

/// Undirected edge table. `edge_triangles[e]` holds one or two incident
/// triangles (second is -1 on the boundary).
struct EdgeTopology
{
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 2>> edge_triangles;

    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_boundary_edges() const;
};

inline constexpr double kDegenerateArea = 1e-14;

double triangle_area(const TriangleMesh& mesh, int tri);
double total_area(const TriangleMesh& mesh);
double mean_edge_length(const TriangleMesh& mesh);

/// Builds the edge table and checks manifoldness and consistent orientation.
/// Throws TopologyError naming the offending edge.
EdgeTopology build_edges(const TriangleMesh& mesh);

/// Index range, orientation, manifoldness, degenerate triangles, isolated
/// vertices. Closed meshes are required unless `allow_boundary`.
void validate(const TriangleMesh& mesh, bool allow_boundary = false);

bool is_closed(const TriangleMesh& mesh);
int connected_components(const TriangleMesh& mesh);
int euler_characteristic(const TriangleMesh& mesh);

/// g = (2 - V + E - F) / 2 for a closed connected manifold.
int genus(const TriangleMesh& mesh);

/// Vertex one-rings ordered counter-clockwise around the outward normal.
/// For boundary vertices the ring is open and `closed[v]` is false.
struct OneRings
{
    std::vector<std::vector<int>> rings;
    std::vector<bool> closed;
};
OneRings one_rings(const TriangleMesh& mesh);

enum class NormalMode { AreaWeighted, LoopLimit };

/// Unit vertex normals. Loop-limit mode falls back to area weighting at
/// boundary vertices (a warning is printed once).
PositionMatrix compute_vertex_normals(const TriangleMesh& mesh, NormalMode mode);

/// Loop's vertex weight for the given valence.
double loop_beta(int valence);

/// (1 + valence) x (1 + valence) one-ring Loop subdivision matrix acting on
/// (center, ring...) and producing (new center, edge points...).
Eigen::MatrixXd loop_ring_stencil(int valence);

/// min over triangles and corners of <n_corner, n_face>.
double min_normal_consistency(const OrientedMesh& mesh);

/// Throws GeometryError if some corner normal is not consistent with its face
/// normal, or a normal is not unit length.
void validate_normals(const OrientedMesh& mesh);

/// Standard 1-to-4 Loop subdivision of a closed mesh; normals recomputed with
/// `mode`.
OrientedMesh loop_subdivide(const OrientedMesh& mesh, NormalMode mode = NormalMode::LoopLimit);
TriangleMesh loop_subdivide(const TriangleMesh& mesh);

/// Uniformly scales positions so the total area is one. Normals unchanged.
OrientedMesh rescale_unit_area(const OrientedMesh& mesh);

/// Ratio of the longest edge to the shortest altitude, scaled so an
/// equilateral triangle has ratio 1.
std::vector<double> aspect_ratios(const TriangleMesh& mesh);

/// Condition number of the per-triangle metric g = dPhi^T dPhi.
std::vector<double> metric_condition_numbers(const TriangleMesh& mesh);

} // namespace tvf
