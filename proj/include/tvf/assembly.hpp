// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/elements.hpp>
#include <tvf/frames.hpp>

#include <Eigen/SparseCore>

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace tvf {

struct AssemblyOptions
{
    /// Evaluate element matrices on several threads. Triplets are merged in
    /// triangle order, so the result is bitwise identical to the serial path.
    bool parallel = false;
    unsigned threads = 0; // 0: hardware concurrency
};

/// Finite element assembly with K degrees of freedom per vertex: global index
/// v*K + k receives element entry m*K + k for corner m.
template <int K, typename ElementFn>
SparseMatrix assemble(const TriangleMesh& mesh, ElementFn&& element, const AssemblyOptions& options = {})
{
    using Triplet = Eigen::Triplet<double>;
    const int nt = mesh.num_triangles();
    auto emit = [&](int begin, int end, std::vector<Triplet>& out) {
        out.reserve(out.size() + static_cast<size_t>(end - begin) * 9 * K * K);
        for (int tri = begin; tri < end; ++tri) {
            const Eigen::Matrix<double, 3 * K, 3 * K> l = element(tri);
            for (int m = 0; m < 3; ++m) {
                for (int n = 0; n < 3; ++n) {
                    for (int k = 0; k < K; ++k) {
                        for (int q = 0; q < K; ++q) {
                            out.emplace_back(
                                mesh.triangles(tri, m) * K + k, mesh.triangles(tri, n) * K + q, l(m * K + k, n * K + q));
                        }
                    }
                }
            }
        }
    };

    std::vector<Triplet> triplets;
    if (!options.parallel) {
        emit(0, nt, triplets);
    } else {
        unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, std::max(1, nt));
        std::vector<std::vector<Triplet>> chunks(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<long long>(nt) * w / workers);
            const int end = static_cast<int>(static_cast<long long>(nt) * (w + 1) / workers);
            pool.emplace_back([&, w, begin, end] { emit(begin, end, chunks[w]); });
        }
        for (auto& t : pool) t.join();
        for (auto& c : chunks) triplets.insert(triplets.end(), c.begin(), c.end());
    }
    const int dim = mesh.num_vertices() * K;
    SparseMatrix out(dim, dim);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

SparseMatrix scalar_mass(const TriangleMesh& mesh, const AssemblyOptions& options = {});
SparseMatrix scalar_stiffness(const TriangleMesh& mesh, const AssemblyOptions& options = {});

SparseMatrix vector_mass(
    const FramedMesh& mesh, const QuadratureRule<double>& rule = quadrature_3pt(), const AssemblyOptions& options = {});
SparseMatrix vector_stiffness(
    const FramedMesh& mesh,
    const EnergySpec& spec,
    const QuadratureRule<double>& rule = quadrature_3pt(),
    const AssemblyOptions& options = {});

/// Diagonal row-sum lumping.
SparseMatrix lump(const SparseMatrix& mass);

/// Per-vertex 90 degree rotation [[0,-1],[1,0]] in frame coordinates.
SparseMatrix build_J(int num_vertices);

/// Field evaluable at (triangle, reference point) returning an ambient vector.
using AmbientEvaluator = std::function<Vec3<double>(int, const BaryPoint<double>&)>;
using ScalarEvaluator = std::function<double(int, const BaryPoint<double>&)>;

/// Weak representation b_i = integral <w_i, F> dA against the vector basis.
Eigen::VectorXd assemble_vector_rhs(
    const FramedMesh& mesh, const AmbientEvaluator& field, const QuadratureRule<double>& rule = quadrature_3pt());

/// Weak representation b_i = integral psi_i f dA against the hat basis.
Eigen::VectorXd assemble_scalar_rhs(
    const TriangleMesh& mesh, const ScalarEvaluator& field, const QuadratureRule<double>& rule = quadrature_3pt());

/// Max |A - A^T| entry.
double asymmetry(const SparseMatrix& a);

} // namespace tvf
