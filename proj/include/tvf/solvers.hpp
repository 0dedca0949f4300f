// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/common.hpp>

#include <Eigen/SparseCholesky>

#include <cstdint>
#include <map>
#include <memory>

namespace tvf {

/// Sparse LDL^T factorization of a symmetric positive definite matrix with
/// iterative refinement to a relative residual of 1e-10.
class SpdSolver
{
public:
    SpdSolver() = default;
    explicit SpdSolver(const SparseMatrix& a) { compute(a); }

    /// Throws SolverError (with the offending pivot) when `a` is not
    /// numerically positive definite.
    void compute(const SparseMatrix& a);

    /// Throws SolverError if refinement cannot reach the target residual.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

    /// Best refined solution without the residual check (inner solves of
    /// iterative methods on near-singular shifted operators).
    Eigen::VectorXd solve_refined(const Eigen::VectorXd& b, double* relative_residual = nullptr) const;

    Eigen::Index rows() const { return matrix_.rows(); }

private:
    SparseMatrix matrix_;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
};

Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b);

/// argmin x^T S x subject to x[i] = fixed[i], by eliminating the fixed
/// variables and solving the free block.
Eigen::VectorXd solve_constrained(const SparseMatrix& s, const std::map<int, double>& fixed);

struct EigenOptions
{
    double tolerance = 1e-9; // relative residual
    int max_restarts = 500;
    int extra_vectors = -1;  // retained beyond k; -1 picks max(10, k)
    std::uint64_t seed = 0x5eedULL;
};

/// Eigenpairs with values ascending and vectors M-orthonormal.
struct EigenResult
{
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors; // one column per eigenpair
    Eigen::VectorXd residuals;
    int restarts = 0;
};

/// k algebraically smallest solutions of S x = lambda M x. Shift-invert with
/// a small negative shift so singular S is fine; restarted block Lanczos with
/// full M-reorthogonalization.
EigenResult smallest_generalized_eigs(
    const SparseMatrix& s, const SparseMatrix& m, int k, const EigenOptions& options = {});

/// Relative residual ||S x - lambda M x|| / ((||S|| + |lambda| ||M||) ||x||)
/// with infinity norms.
double eigen_residual(const SparseMatrix& s, const SparseMatrix& m, double lambda, const Eigen::VectorXd& x);

} // namespace tvf
