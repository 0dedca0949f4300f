// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tvf/assembly.hpp>
#include <tvf/fields.hpp>
#include <tvf/frames.hpp>
#include <tvf/solvers.hpp>
#include <tvf/synth.hpp>

#include <cstdint>

namespace tvf::experiments {

/// |a - b| / |a + b|.
double relative_gap(double a, double b);
/// ||A - B||_F / ||A + B||_F.
double frobenius_ratio(const SparseMatrix& a, const SparseMatrix& b);

struct SphereSpectrum
{
    Eigen::VectorXd values;    // connection eigenvalues
    Eigen::VectorXd reference; // n(n+1) - 1 with multiplicity 4n + 2
    Eigen::VectorXd ratio;     // |computed - reference| / |computed + reference|
    double mean_ratio = 0.0;
};

/// First `count` connection eigenvalues of a unit-sphere mesh.
SphereSpectrum sphere_spectrum(const OrientedMesh& mesh, int count, const EigenOptions& options = {});

struct HodgeComparison
{
    int genus = 0;
    Eigen::VectorXd hodge;     // 2 x Hodge-energy eigenvalues, 2 (g + count) entries
    Eigen::VectorXd cotangent; // cotangent eigenvalues, count + 1 entries (index 0 is the constant)
    Eigen::MatrixXd ratio;     // count x 2: both members of pair i against cotangent eigenvalue i + 1
    double rho = 0.0;          // lambda_{2g-1} / lambda_{2g} of the Hodge spectrum (0 for g = 0)
};

/// Hodge eigenvalues 2(g+i), 2(g+i)+1 paired with cotangent eigenvalue i+1.
/// The Hodge energy weights the divergence and curl parts by one half, so its
/// eigenvalues are doubled before comparison.
HodgeComparison hodge_compare(const OrientedMesh& mesh, int count, const EigenOptions& options = {});

struct RotationInvariance
{
    double mass = 0.0;      // M against J^T M J
    double traceless = 0.0; // traceless stiffness against its conjugate
    double div_curl = 0.0;  // divergence stiffness against J^T (curl) J
};

RotationInvariance rotation_invariance(const FramedMesh& mesh);

/// E of the projected bracket of two random band-limited sphere fields
/// (seeds 2 s and 2 s + 1) against the analytic bracket.
double sphere_bracket_error(const FramedMesh& mesh, int bandwidth, std::uint64_t seed, BracketMode mode = BracketMode::Projected);
/// Same for pushed-forward planar fields on a generated torus.
double torus_bracket_error(const TorusMesh& torus, int bandwidth, std::uint64_t seed, BracketMode mode = BracketMode::Projected);

/// Unit vectors (-z, 0, x) / r around the y axis.
PositionMatrix azimuthal_directions(const PositionMatrix& points);
/// Mean |<v/|v|, a>| over vertices with nonzero v.
double mean_alignment(const PositionMatrix& vectors, const PositionMatrix& directions);

} // namespace tvf::experiments
