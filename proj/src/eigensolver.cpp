// SPDX-License-Identifier: Apache-2.0
#include <tvf/solvers.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace tvf {

namespace {

double inf_norm(const SparseMatrix& a)
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

/// M-orthonormal basis grown column by column with two passes of classical
/// Gram-Schmidt; keeps M*Q alongside Q.
class MBasis
{
public:
    MBasis(const SparseMatrix& m, Eigen::Index rows, Eigen::Index capacity)
        : m_(m), q_(rows, capacity), mq_(rows, capacity)
    {}

    Eigen::Index size() const { return size_; }
    Eigen::Index capacity() const { return q_.cols(); }
    auto basis() const { return q_.leftCols(size_); }
    auto mass_basis() const { return mq_.leftCols(size_); }

    void reset() { size_ = 0; }

    /// Appends the part of x orthogonal to the current basis. Returns false
    /// (and appends nothing) when that part is negligible.
    bool append(Eigen::VectorXd x)
    {
        if (size_ >= capacity()) return false;
        const double original = std::sqrt(std::max(0.0, x.dot(m_ * x)));
        if (!(original > 0.0)) return false;
        for (int pass = 0; pass < 2; ++pass) {
            if (size_ > 0) x -= basis() * (mass_basis().transpose() * x);
        }
        Eigen::VectorXd mx = m_ * x;
        const double norm = std::sqrt(std::max(0.0, x.dot(mx)));
        if (!(norm > 1e-10 * original)) return false;
        q_.col(size_) = x / norm;
        mq_.col(size_) = mx / norm;
        ++size_;
        return true;
    }

    /// Appends already M-orthonormal columns without re-orthogonalizing.
    void append_orthonormal(const Eigen::VectorXd& x)
    {
        q_.col(size_) = x;
        mq_.col(size_) = m_ * x;
        ++size_;
    }

private:
    const SparseMatrix& m_;
    Eigen::MatrixXd q_;
    Eigen::MatrixXd mq_;
    Eigen::Index size_ = 0;
};

} // namespace

double eigen_residual(const SparseMatrix& s, const SparseMatrix& m, double lambda, const Eigen::VectorXd& x)
{
    const double scale = (inf_norm(s) + std::abs(lambda) * inf_norm(m)) * x.norm();
    const double r = (s * x - lambda * (m * x)).norm();
    return scale > 0.0 ? r / scale : r;
}

EigenResult smallest_generalized_eigs(const SparseMatrix& s, const SparseMatrix& m, int k, const EigenOptions& options)
{
    const Eigen::Index n = s.rows();
    if (s.cols() != n || m.rows() != n || m.cols() != n) throw SolverError("eigensolver: dimension mismatch");
    if (k <= 0 || k > n) throw SolverError("eigensolver: requested count out of range");

    const double trace = s.diagonal().sum();
    const double mean_diag = trace > 0.0 ? trace / n : m.diagonal().sum() / n;
    const double shift = -1e-6 * mean_diag;
    const SparseMatrix shifted = s - shift * m;
    SpdSolver factor;
    try {
        factor.compute(shifted);
    } catch (const SolverError& e) {
        throw SolverError(std::string("eigensolver: shifted operator not positive definite; ") + e.what());
    }
    auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return factor.solve_refined(Eigen::VectorXd(m * x)); };

    const int extra = options.extra_vectors >= 0 ? options.extra_vectors : std::max(10, k);
    const Eigen::Index keep = std::min<Eigen::Index>(n, k + extra);
    const Eigen::Index capacity = std::min<Eigen::Index>(n, 3 * keep);

    const double s_norm = inf_norm(s);
    const double m_norm = inf_norm(m);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    auto random_vector = [&] {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x[i] = gauss(rng);
        return x;
    };

    MBasis basis(m, n, capacity);
    Eigen::MatrixXd images(n, capacity); // Op applied to each basis column
    std::vector<Eigen::VectorXd> pending;  // next block to orthogonalize
    for (Eigen::Index c = 0; c < keep; ++c) pending.push_back(random_vector());

    EigenResult result;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        // Grow the Krylov basis block by block.
        while (basis.size() < capacity) {
            const Eigen::Index before = basis.size();
            for (auto& x : pending) {
                if (basis.size() >= capacity) break;
                if (basis.append(x)) {
                    images.col(basis.size() - 1) = apply(basis.basis().col(basis.size() - 1));
                }
            }
            pending.clear();
            if (basis.size() == before) {
                // Invariant subspace reached: refill with random directions.
                if (basis.size() >= n) break;
                for (int tries = 0; tries < 4 && basis.size() == before; ++tries) {
                    if (basis.append(random_vector())) {
                        images.col(basis.size() - 1) = apply(basis.basis().col(basis.size() - 1));
                    }
                }
                if (basis.size() == before) break;
            }
            for (Eigen::Index c = before; c < basis.size(); ++c) pending.push_back(images.col(c));
        }

        const Eigen::Index dim = basis.size();
        const Eigen::MatrixXd q = basis.basis();
        const Eigen::MatrixXd w = images.leftCols(dim);
        Eigen::MatrixXd h = basis.mass_basis().transpose() * w;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
        if (small.info() != Eigen::Success) throw ConvergenceError("eigensolver: projected problem failed");

        // Largest theta <-> smallest lambda = shift + 1/theta.
        std::vector<Eigen::Index> order(dim);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) {
            return small.eigenvalues()[a] > small.eigenvalues()[b];
        });
        const Eigen::Index retain = std::min(keep, dim);
        Eigen::MatrixXd y(dim, retain);
        Eigen::VectorXd lambdas(retain);
        for (Eigen::Index c = 0; c < retain; ++c) {
            y.col(c) = small.eigenvectors().col(order[c]);
            const double theta = small.eigenvalues()[order[c]];
            lambdas[c] = theta > 0.0 ? shift + 1.0 / theta : std::numeric_limits<double>::infinity();
        }
        const Eigen::MatrixXd ritz = q * y;
        const Eigen::MatrixXd ritz_images = w * y;

        Eigen::VectorXd residuals(k);
        bool converged = retain >= k;
        for (int c = 0; c < k && c < retain; ++c) {
            const Eigen::VectorXd x = ritz.col(c);
            const double scale = (s_norm + std::abs(lambdas[c]) * m_norm) * x.norm();
            const double r = (s * x - lambdas[c] * (m * x)).norm();
            residuals[c] = scale > 0.0 ? r / scale : r;
            if (!(residuals[c] <= options.tolerance)) converged = false;
        }
        result.restarts = restart;
        if (converged || dim >= n) {
            // Final Rayleigh-Ritz with S itself: the values no longer carry the
            // inner-solve error of the shifted inverse.
            const Eigen::MatrixXd sr = ritz.transpose() * (s * ritz);
            const Eigen::MatrixXd mr = ritz.transpose() * (m * ritz);
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (sr + sr.transpose()), 0.5 * (mr + mr.transpose()));
            if (rr.info() == Eigen::Success) {
                result.values = rr.eigenvalues().head(k);
                result.vectors = ritz * rr.eigenvectors().leftCols(k);
            } else {
                result.values = lambdas.head(k);
                result.vectors = ritz.leftCols(k);
            }
            result.residuals = residuals;
            for (int c = 0; c < k; ++c) {
                result.residuals[c] = eigen_residual(s, m, result.values[c], result.vectors.col(c));
            }
            return result;
        }

        // Thick restart: keep the Ritz vectors, continue from their residual
        // directions Op(x) - x/theta.
        basis.reset();
        for (Eigen::Index c = 0; c < retain; ++c) {
            basis.append_orthonormal(ritz.col(c));
            images.col(c) = ritz_images.col(c);
        }
        pending.clear();
        for (Eigen::Index c = 0; c < retain; ++c) {
            const double theta = small.eigenvalues()[order[c]];
            pending.push_back(ritz_images.col(c) - theta * ritz.col(c));
        }
        result.residuals = residuals;
    }

    std::ostringstream msg;
    msg << "eigensolver: no convergence after " << options.max_restarts << " restarts; worst residual "
        << result.residuals.maxCoeff();
    throw ConvergenceError(msg.str());
}

} // namespace tvf
