// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/mesh.hpp>
#include <tvf/patch.hpp>

#include <cstdint>
#include <span>

namespace tvf {

/// Orthonormal right-handed tangent frame (t0, t1, n) at every vertex.
struct VertexFrames
{
    PositionMatrix t0;
    PositionMatrix t1;
};

/// t0 = normalize(a - n<n,a>) with a = e1 unless |<n,e1>| >= 0.9 (then e2);
/// t1 = n x t0.
VertexFrames compute_vertex_frames(const PositionMatrix& normals);

/// Rotates each vertex frame in its tangent plane by `angles[v]` radians.
VertexFrames rotate_vertex_frames(const VertexFrames& frames, const PositionMatrix& normals, std::span<const double> angles);

/// An oriented mesh with its vertex frames: everything needed to evaluate the
/// vector-field basis.
struct FramedMesh
{
    OrientedMesh oriented;
    VertexFrames frames;

    const TriangleMesh& mesh() const { return oriented.mesh; }
    int num_vertices() const { return oriented.num_vertices(); }
    int num_triangles() const { return oriented.num_triangles(); }

    Vec3<double> realize(int v, const Vec2<double>& coeffs) const
    {
        return coeffs[0] * frames.t0.row(v).transpose() + coeffs[1] * frames.t1.row(v).transpose();
    }
    Vec2<double> project(int v, const Vec3<double>& vec) const
    {
        return {frames.t0.row(v).dot(vec.transpose()), frames.t1.row(v).dot(vec.transpose())};
    }
};

/// Validates normals (unit length, consistent with faces, no antipodal
/// corner/face pairs) and attaches default frames.
FramedMesh make_framed(OrientedMesh mesh);

/// Same mesh, frames rotated by uniformly random angles.
FramedMesh with_random_frames(const FramedMesh& mesh, std::uint64_t seed);

TrianglePatch<double> make_patch(const FramedMesh& mesh, int tri);

} // namespace tvf
