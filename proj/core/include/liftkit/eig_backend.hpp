#pragma once

#include <cstdint>

#include "liftkit/types.hpp"

namespace liftkit {

/// Full dense eigendecomposition: eigenvalues plus unit right eigenvectors
/// stored column-wise.
struct EigenPairSet {
    Vector values;
    Matrix right_vectors;
    double machine_eps = kMachineEps;

    Eigen::Index size() const { return values.size(); }
};

struct EigenPair {
    Complex value;
    Vector vector;
    Eigen::Index index = 0;
};

/// Right and left singular vectors belonging to the smallest singular value.
struct SvdNullPair {
    Vector right;  // A * right ~ 0
    Vector left;   // left^T * A ~ 0 (bilinear form)
    double sigma_min = 0.0;
};

/// Dense eigendecomposition through LAPACK: dgeev when every entry is real,
/// zgeev otherwise.
///
/// Throws NonSquare for a non-square input and BackendFailure when the input
/// holds non-finite entries or the QR iteration does not converge.
EigenPairSet eig_all(const Matrix& m);

/// Eigenpair minimizing |lambda - target|; ties go to the lowest index. The
/// returned vector is phase-normalized.
EigenPair nearest_eigenpair(const EigenPairSet& pairs, Complex target);

/// Eigenpair of the plain transpose m^T nearest `target`, i.e. y with
/// y^T m = lambda y^T.
EigenPair left_nullpair(const Matrix& m, Complex target);

/// Unit vector with its largest-modulus component rotated to be real and
/// positive. The first component within rounding of the maximum modulus wins.
Vector phase_normalize(const Vector& v);

/// Smallest-singular-value nullvector estimate for a (near-)singular matrix.
/// Unlike eigenvectors of a defective eigenvalue, these stay accurate to
/// working precision while the null space is one-dimensional.
SvdNullPair svd_nullpair(const Matrix& m);

/// Seeded real orthogonal matrix: Gaussian matrix orthonormalized by
/// Householder QR, columns sign-fixed so that R has a positive diagonal.
Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed);

/// Largest ||M v - lambda v|| over all pairs; used to audit the residual
/// contract 100 * n * ||M||_F * eps.
double max_residual(const Matrix& m, const EigenPairSet& pairs);

}  // namespace liftkit
