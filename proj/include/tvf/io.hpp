// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/mesh.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace tvf {

struct ObjOptions
{
    /// Ignore `vn` records and compute loop-limit normals.
    bool recompute_normals = false;
};

/// Wavefront OBJ (`v`, `vn`, `f`). Polygons are fan-triangulated; negative
/// (relative) indices are accepted. `vn` records are used as vertex normals
/// when there is exactly one per vertex (renormalized); otherwise loop-limit
/// normals are computed. Throws ParseError, TopologyError or GeometryError.
OrientedMesh load_obj(const std::filesystem::path& path, const ObjOptions& options = {});
OrientedMesh read_obj(std::istream& in, const ObjOptions& options = {});

void save_obj(const std::filesystem::path& path, const OrientedMesh& mesh);
void write_obj(std::ostream& out, const OrientedMesh& mesh);

/// Binary little-endian PLY with float vertex properties
/// x y z nx ny nz vx vy vz and the triangle list.
void save_ply(const std::filesystem::path& path, const OrientedMesh& mesh, const PositionMatrix& vectors);

/// Per-vertex field coefficients as CSV with header `vertex,coeff_a,coeff_b`.
void save_field_csv(const std::filesystem::path& path, const Eigen::VectorXd& coeffs);
Eigen::VectorXd load_field_csv(const std::filesystem::path& path);

/// Matrix Market coordinate format (general, real).
void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);

} // namespace tvf
