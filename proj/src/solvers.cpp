// SPDX-License-Identifier: Apache-2.0
#include <tvf/solvers.hpp>

#include <cmath>
#include <sstream>
#include <vector>

namespace tvf {

namespace {

constexpr double kRefineTolerance = 1e-10;
constexpr int kRefineSteps = 4;

} // namespace

void SpdSolver::compute(const SparseMatrix& a)
{
    if (a.rows() != a.cols()) throw SolverError("solve_spd: matrix is not square");
    matrix_ = a;
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>();
    ldlt_->compute(matrix_);
    if (ldlt_->info() != Eigen::Success) throw SolverError("solve_spd: factorization failed");

    const Eigen::VectorXd& d = ldlt_->vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    const auto inverse = ldlt_->permutationPinv();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d[i] > 1e-14 * scale)) {
            std::ostringstream msg;
            msg << "solve_spd: matrix is not positive definite (pivot " << d[i] << " at row "
                << inverse.indices()[i] << ")";
            throw SolverError(msg.str());
        }
    }
}

Eigen::VectorXd SpdSolver::solve_refined(const Eigen::VectorXd& b, double* relative_residual) const
{
    if (!ldlt_) throw SolverError("SpdSolver used before compute()");
    Eigen::VectorXd x = ldlt_->solve(b);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        if (relative_residual) *relative_residual = 0.0;
        return x;
    }
    Eigen::VectorXd r = b - matrix_ * x;
    double rel = r.norm() / bnorm;
    for (int step = 0; step < kRefineSteps && rel > kRefineTolerance; ++step) {
        const Eigen::VectorXd candidate = x + ldlt_->solve(r);
        const Eigen::VectorXd rc = b - matrix_ * candidate;
        const double rel_c = rc.norm() / bnorm;
        if (!(rel_c < rel)) break; // stagnated
        x = candidate;
        r = rc;
        rel = rel_c;
    }
    if (relative_residual) *relative_residual = rel;
    return x;
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& b) const
{
    double rel = 0.0;
    Eigen::VectorXd x = solve_refined(b, &rel);
    if (rel > kRefineTolerance) {
        std::ostringstream msg;
        msg << "solve_spd: relative residual " << rel << " after refinement";
        throw SolverError(msg.str());
    }
    return x;
}

Eigen::MatrixXd SpdSolver::solve(const Eigen::MatrixXd& b) const
{
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(Eigen::VectorXd(b.col(c)));
    return x;
}

Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b) { return SpdSolver(a).solve(b); }

Eigen::VectorXd solve_constrained(const SparseMatrix& s, const std::map<int, double>& fixed)
{
    const Eigen::Index n = s.rows();
    if (fixed.empty()) throw SolverError("solve_constrained: at least one constraint required");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<int> free_index(n, -1);
    std::vector<Eigen::Index> free_rows;
    for (const auto& [i, value] : fixed) {
        if (i < 0 || i >= n) throw SolverError("solve_constrained: constraint index out of range");
        x[i] = value;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!fixed.count(static_cast<int>(i))) {
            free_index[i] = static_cast<int>(free_rows.size());
            free_rows.push_back(i);
        }
    }
    if (free_rows.empty()) return x;

    const Eigen::Index nf = static_cast<Eigen::Index>(free_rows.size());
    std::vector<Eigen::Triplet<double>> block;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (int col = 0; col < s.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(s, col); it; ++it) {
            const int fr = free_index[it.row()];
            if (fr < 0) continue;
            const int fc = free_index[it.col()];
            if (fc >= 0) {
                block.emplace_back(fr, fc, it.value());
            } else {
                rhs[fr] -= it.value() * x[it.col()];
            }
        }
    }
    SparseMatrix sff(nf, nf);
    sff.setFromTriplets(block.begin(), block.end());
    Eigen::VectorXd xf;
    try {
        xf = SpdSolver(sff).solve(rhs);
    } catch (const SolverError& e) {
        throw SolverError(std::string("solve_constrained: free block is singular; ") + e.what());
    }
    for (Eigen::Index k = 0; k < nf; ++k) x[free_rows[k]] = xf[k];
    return x;
}

} // namespace tvf
