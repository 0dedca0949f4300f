// SPDX-License-Identifier: Apache-2.0
#include <tvf/io.hpp>

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace tvf {

namespace {

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

[[noreturn]] void parse_fail(int line, const std::string& what)
{
    throw ParseError("OBJ line " + std::to_string(line) + ": " + what);
}

// Resolves a 1-based (or negative, relative) OBJ index to 0-based.
int resolve_index(long raw, size_t count, int line)
{
    if (raw == 0) parse_fail(line, "index 0 is invalid (OBJ indices are 1-based)");
    const long idx = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
    if (idx < 0 || idx >= static_cast<long>(count)) parse_fail(line, "index " + std::to_string(raw) + " out of range");
    return static_cast<int>(idx);
}

std::vector<double> parse_reals(std::istringstream& in, int line, size_t need)
{
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            parse_fail(line, "malformed number '" + tok + "'");
        }
    }
    if (out.size() < need) parse_fail(line, "expected " + std::to_string(need) + " coordinates");
    return out;
}

template <typename T>
void put(std::ostream& out, T value)
{
    static_assert(std::endian::native == std::endian::little, "PLY writer assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

} // namespace

OrientedMesh read_obj(std::istream& in, const ObjOptions& options)
{
    std::vector<Vec3<double>> positions, normals;
    std::vector<std::array<int, 3>> tris;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::string tag;
        if (!(line >> tag)) continue;
        if (tag == "v") {
            const auto c = parse_reals(line, line_no, 3);
            positions.emplace_back(c[0], c[1], c[2]);
        } else if (tag == "vn") {
            const auto c = parse_reals(line, line_no, 3);
            normals.emplace_back(c[0], c[1], c[2]);
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string tok;
            while (line >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                long value = 0;
                try {
                    size_t used = 0;
                    value = std::stol(head, &used);
                    if (used != head.size()) throw std::invalid_argument(head);
                } catch (const std::exception&) {
                    parse_fail(line_no, "malformed face index '" + tok + "'");
                }
                poly.push_back(resolve_index(value, positions.size(), line_no));
            }
            if (poly.size() < 3) parse_fail(line_no, "face with fewer than 3 vertices");
            for (size_t k = 1; k + 1 < poly.size(); ++k) tris.push_back({poly[0], poly[k], poly[k + 1]});
        }
        // Other records (vt, o, g, s, usemtl, ...) are ignored.
    }
    if (positions.empty() || tris.empty()) throw ParseError("OBJ has no vertices or faces");

    OrientedMesh out;
    out.mesh.vertices.resize(static_cast<Eigen::Index>(positions.size()), 3);
    for (size_t i = 0; i < positions.size(); ++i) out.mesh.vertices.row(static_cast<Eigen::Index>(i)) = positions[i].transpose();
    out.mesh.triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (size_t i = 0; i < tris.size(); ++i)
        out.mesh.triangles.row(static_cast<Eigen::Index>(i)) << tris[i][0], tris[i][1], tris[i][2];

    validate(out.mesh, /*allow_boundary=*/true);

    if (!options.recompute_normals && normals.size() == positions.size()) {
        out.normals.resize(out.mesh.vertices.rows(), 3);
        for (size_t i = 0; i < normals.size(); ++i) {
            const double len = normals[i].norm();
            if (!(len > 0.0)) throw GeometryError("OBJ normal " + std::to_string(i + 1) + " has zero length");
            out.normals.row(static_cast<Eigen::Index>(i)) = (normals[i] / len).transpose();
        }
    } else {
        out.normals = compute_vertex_normals(out.mesh, NormalMode::LoopLimit);
    }
    return out;
}

OrientedMesh load_obj(const std::filesystem::path& path, const ObjOptions& options)
{
    auto in = open_in(path);
    return read_obj(in, options);
}

void write_obj(std::ostream& out, const OrientedMesh& mesh)
{
    out << std::setprecision(17);
    const auto& m = mesh.mesh;
    for (int v = 0; v < m.num_vertices(); ++v)
        out << "v " << m.vertices(v, 0) << ' ' << m.vertices(v, 1) << ' ' << m.vertices(v, 2) << '\n';
    for (int v = 0; v < mesh.normals.rows(); ++v)
        out << "vn " << mesh.normals(v, 0) << ' ' << mesh.normals(v, 1) << ' ' << mesh.normals(v, 2) << '\n';
    const bool with_normals = mesh.normals.rows() == m.num_vertices();
    for (int t = 0; t < m.num_triangles(); ++t) {
        out << 'f';
        for (int k = 0; k < 3; ++k) {
            const int i = m.triangles(t, k) + 1;
            out << ' ' << i;
            if (with_normals) out << "//" << i;
        }
        out << '\n';
    }
}

void save_obj(const std::filesystem::path& path, const OrientedMesh& mesh)
{
    auto out = open_out(path);
    write_obj(out, mesh);
}

void save_ply(const std::filesystem::path& path, const OrientedMesh& mesh, const PositionMatrix& vectors)
{
    const auto& m = mesh.mesh;
    if (mesh.normals.rows() != m.num_vertices() || vectors.rows() != m.num_vertices())
        throw Error("save_ply: normals/vectors must have one row per vertex");
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << m.num_vertices() << '\n';
    for (const char* p : {"x", "y", "z", "nx", "ny", "nz", "vx", "vy", "vz"}) out << "property float " << p << '\n';
    out << "element face " << m.num_triangles() << '\n'
        << "property list uchar int vertex_indices\nend_header\n";
    for (int v = 0; v < m.num_vertices(); ++v) {
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(m.vertices(v, k)));
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(mesh.normals(v, k)));
        for (int k = 0; k < 3; ++k) put(out, static_cast<float>(vectors(v, k)));
    }
    for (int t = 0; t < m.num_triangles(); ++t) {
        put(out, std::uint8_t{3});
        for (int k = 0; k < 3; ++k) put(out, static_cast<std::int32_t>(m.triangles(t, k)));
    }
    if (!out) throw Error("save_ply: write failed for '" + path.string() + "'");
}

void save_field_csv(const std::filesystem::path& path, const Eigen::VectorXd& coeffs)
{
    if (coeffs.size() % 2 != 0) throw Error("save_field_csv: coefficient vector has odd length");
    auto out = open_out(path);
    out << "vertex,coeff_a,coeff_b\n" << std::setprecision(17);
    for (Eigen::Index v = 0; v < coeffs.size() / 2; ++v) out << v << ',' << coeffs[2 * v] << ',' << coeffs[2 * v + 1] << '\n';
}

Eigen::VectorXd load_field_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("vertex,coeff_a,coeff_b", 0) != 0)
        throw ParseError("field CSV: missing header 'vertex,coeff_a,coeff_b'");
    std::vector<std::pair<long, Vec2<double>>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        long v;
        double a, b;
        char c1, c2;
        if (!(ss >> v >> c1 >> a >> c2 >> b) || c1 != ',' || c2 != ',')
            throw ParseError("field CSV line " + std::to_string(line_no) + ": malformed row");
        rows.push_back({v, {a, b}});
    }
    Eigen::VectorXd out(2 * static_cast<Eigen::Index>(rows.size()));
    std::vector<bool> seen(rows.size(), false);
    for (const auto& [v, c] : rows) {
        if (v < 0 || v >= static_cast<long>(rows.size()) || seen[v])
            throw ParseError("field CSV: vertex ids must be a permutation of 0..n-1");
        seen[v] = true;
        out.segment<2>(2 * v) = c;
    }
    return out;
}

void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& a)
{
    auto out = open_out(path);
    out << "%%MatrixMarket matrix coordinate real general\n"
        << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n'
        << std::setprecision(17);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

} // namespace tvf
