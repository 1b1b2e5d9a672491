#pragma once

#include <cstdint>

#include "liftkit/lifting.hpp"
#include "liftkit/types.hpp"

namespace liftkit {

/// The 2x2 family M(eps) = [[pi, 1], [-pi^2/4, eps]]. At eps = 0 the
/// eigenvalue pi/2 is a double root with a single eigenvector.
struct TwoByTwoFamily {
    double epsilon = 0.0;
    Matrix m;
    Complex mu_plus;
    Complex mu_minus;
    Complex ratio_plus;  // phi_2 / phi_1 for mu_plus, i.e. mu_plus - pi

    /// M - mu_plus * I.
    Matrix shifted() const;
    /// Unit right nullvector of shifted(): proportional to (1, mu_plus - pi).
    Vector right_nullvector() const;
    /// Unit left nullvector of shifted() (psi^T A = 0): proportional to (mu_plus - eps, 1).
    Vector left_nullvector() const;
};

TwoByTwoFamily make_2x2(double epsilon);

enum class PoissonLayout {
    Auto,  // 2-D 5-point grid when m factors as p*q with p, q > 1, else 1-D
    OneD,
};

/// Dirichlet discrete Laplacian of order m. Auto picks the most nearly square
/// p x q grid (p <= q) with diagonal 4; prime m falls back to the 1-D
/// tridiagonal matrix with diagonal 2.
Matrix poisson_block(Eigen::Index m, PoissonLayout layout = PoissonLayout::Auto);

/// Closed-form eigenvalues of poisson_block(m, layout), ascending.
Eigen::VectorXd poisson_eigenvalues(Eigen::Index m, PoissonLayout layout = PoissonLayout::Auto);

/// blockdiag(M(eps), Poisson) hidden behind a seeded orthogonal similarity.
struct LargeTestMatrix {
    Eigen::Index n = 0;
    double epsilon = 0.0;
    Matrix a;          // q^T (C - mu_plus I) q
    Matrix unshifted;  // q^T C q
    Matrix q;
    Complex mu_plus;
    Complex ratio_plus;
    std::uint64_t seed = 0;
    PoissonLayout layout = PoissonLayout::Auto;

    /// Unit right nullvector of a: q^T (phi_2x2, 0, ..., 0).
    Vector right_nullvector() const;
    /// Unit left nullvector of a: q^T (psi_2x2, 0, ..., 0).
    Vector left_nullvector() const;
};

inline constexpr double kSpectralSeparation = 1e-3;

LargeTestMatrix make_large(Eigen::Index n, double epsilon, std::uint64_t seed);

/// v = beta * v_r, w = gamma * w_r with v_r, w_r unit vectors drawn
/// componentwise from uniform[-1, 1]; eta = omega = 1.
LiftVectors random_lift_vectors(Eigen::Index n, double beta, double gamma, std::uint64_t seed);

/// v = beta * conj(psi), w = beta * conj(phi), eta = omega = 1, so that
/// w^T phi = beta ||phi||^2 and psi^T v = beta ||psi||^2.
LiftVectors adjoint_lift_vectors(const Vector& phi, const Vector& psi, double beta);

}  // namespace liftkit
