// SPDX-License-Identifier: Apache-2.0
#include <tvf/frames.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tvf {

VertexFrames compute_vertex_frames(const PositionMatrix& normals)
{
    VertexFrames f;
    f.t0.resize(normals.rows(), 3);
    f.t1.resize(normals.rows(), 3);
    for (Eigen::Index v = 0; v < normals.rows(); ++v) {
        const Vec3<double> n = normals.row(v).transpose();
        const Vec3<double> a = std::abs(n.x()) < 0.9 ? Vec3<double>::UnitX() : Vec3<double>::UnitY();
        const Vec3<double> t0 = (a - n * n.dot(a)).normalized();
        f.t0.row(v) = t0.transpose();
        f.t1.row(v) = n.cross(t0).transpose();
    }
    return f;
}

VertexFrames rotate_vertex_frames(const VertexFrames& frames, const PositionMatrix& normals, std::span<const double> angles)
{
    if (static_cast<Eigen::Index>(angles.size()) != normals.rows()) {
        throw Error("rotate_vertex_frames: one angle per vertex required");
    }
    VertexFrames out = frames;
    for (Eigen::Index v = 0; v < normals.rows(); ++v) {
        const double c = std::cos(angles[v]);
        const double s = std::sin(angles[v]);
        out.t0.row(v) = c * frames.t0.row(v) + s * frames.t1.row(v);
        out.t1.row(v) = -s * frames.t0.row(v) + c * frames.t1.row(v);
    }
    return out;
}

FramedMesh make_framed(OrientedMesh mesh)
{
    validate_normals(mesh);
    const TriangleMesh& m = mesh.mesh;
    for (int t = 0; t < m.num_triangles(); ++t) {
        const Vec3<double> a = m.corner(t, 0);
        const Vec3<double> n = (m.corner(t, 1) - a).cross(m.corner(t, 2) - a).normalized();
        for (int k = 0; k < 3; ++k) {
            if (!(1.0 + n.dot(mesh.normal(m.triangles(t, k))) > kAntipodalEpsilon)) {
                std::ostringstream msg;
                msg << "triangle " << t << ": corner normal antipodal to face normal";
                throw AntipodalError(msg.str());
            }
        }
    }
    FramedMesh out;
    out.frames = compute_vertex_frames(mesh.normals);
    out.oriented = std::move(mesh);
    return out;
}

FramedMesh with_random_frames(const FramedMesh& mesh, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> angles(mesh.num_vertices());
    for (double& a : angles) a = angle(rng);
    FramedMesh out = mesh;
    out.frames = rotate_vertex_frames(mesh.frames, mesh.oriented.normals, angles);
    return out;
}

TrianglePatch<double> make_patch(const FramedMesh& mesh, int tri)
{
    const TriangleMesh& m = mesh.mesh();
    std::array<Vec3<double>, 3> corners;
    std::array<Vec3<double>, 3> normals;
    std::array<Vec3<double>, 6> frames;
    for (int k = 0; k < 3; ++k) {
        const int v = m.triangles(tri, k);
        corners[k] = m.vertices.row(v).transpose();
        normals[k] = mesh.oriented.normals.row(v).transpose();
        frames[2 * k] = mesh.frames.t0.row(v).transpose();
        frames[2 * k + 1] = mesh.frames.t1.row(v).transpose();
    }
    return TrianglePatch<double>::make(corners, normals, frames);
}

} // namespace tvf
