// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace tvf {

template <typename Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Mat32 = Eigen::Matrix<Scalar, 3, 2>;
template <typename Scalar> using Mat23 = Eigen::Matrix<Scalar, 2, 3>;

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Base class for all library errors. Anything derived from it maps to a
/// precondition failure at the CLI boundary unless stated otherwise.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error
{
public:
    using Error::Error;
};

/// Non-manifold, inconsistently oriented, open where closed is required, etc.
class TopologyError : public Error
{
public:
    using Error::Error;
};

/// Degenerate triangles, zero area, isolated vertices, inconsistent normals.
class GeometryError : public Error
{
public:
    using Error::Error;
};

/// Rodrigues rotation requested for (near-)antipodal unit vectors.
class AntipodalError : public GeometryError
{
public:
    using GeometryError::GeometryError;
};

/// Factorization failure, singular or indefinite system.
class SolverError : public Error
{
public:
    using Error::Error;
};

/// Iterative method ran out of iterations.
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

} // namespace tvf
