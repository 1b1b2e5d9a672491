#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "liftkit/types.hpp"

namespace liftkit {

enum class LiftStrategy { Random, AdjointNullvectors, Custom };

/// The bordering vectors (v, eta) and (w, omega) of a rank-one lift, plus the
/// lifting parameters that scaled them.
struct LiftVectors {
    Vector v;
    Complex eta{1.0, 0.0};
    Vector w;
    Complex omega{1.0, 0.0};
    double beta = 1.0;
    double gamma = 1.0;
    LiftStrategy strategy = LiftStrategy::Custom;
    std::uint64_t seed = 0;  // meaningful for LiftStrategy::Random only

    Eigen::Index size() const { return v.size(); }
    /// (v, eta) as one (N+1)-vector.
    Vector full_v() const;
    /// (w, omega) as one (N+1)-vector.
    Vector full_w() const;
};

/// Inner products that decide whether the lifted matrix has a simple zero
/// eigenvalue, and whether each is nonzero at the working tolerance.
struct ConditionReport {
    Complex w_dot_phi;     // w^T phi
    Complex psi_dot_v;     // psi^T v
    Complex eta_omega;     // eta * omega
    Complex lifted_inner;  // psi^T phi + (psi^T v / eta)(w^T phi / omega)

    bool w_dot_phi_ok = false;
    bool psi_dot_v_ok = false;
    bool eta_omega_ok = false;
    bool lifted_inner_ok = false;

    bool passed() const { return w_dot_phi_ok && psi_dot_v_ok && eta_omega_ok && lifted_inner_ok; }
};

struct LiftedSystem {
    Matrix lifted;  // [[A, 0], [0^T, 0]] + (v, eta)(w, omega)^T
    Matrix a;
    LiftVectors lift;
    // Unit null vectors of A that the condition report was evaluated against.
    Vector phi;
    Vector psi;
    bool reference_supplied = false;
    ConditionReport checks;

    Eigen::Index original_size() const { return a.rows(); }
};

/// Right/left nullpair of the lifted matrix and its split into the original
/// (x, y) and inflated (xi, zeta) components.
struct NullPair {
    Vector phi_lifted;  // (x, xi), unit, phase-normalized
    Vector psi_lifted;  // (y, zeta), unit, phase-normalized; psi^T L ~ 0
    Complex lambda0;
    Complex lambda0_left;
    Vector recovered_right;  // phase_normalize(x)
    Complex xi;
    Complex zeta;
    Complex r;  // x ~ r * phi
    Complex s;  // y ~ s * psi

    Eigen::Index original_size() const { return phi_lifted.size() - 1; }
    auto x() const { return phi_lifted.head(original_size()); }
    auto y() const { return psi_lifted.head(original_size()); }
};

/// "Nonzero" means |value| > kConditionTolFactor * eps * (scale of the factors).
inline constexpr double kConditionTolFactor = 1e3;
/// |xi| or |zeta| below this (for unit nullvectors) raises DegenerateLift.
inline constexpr double kDegenerateTol = 1e3 * kMachineEps;

/// Builds the lifted matrix. The condition report is evaluated against the
/// smallest-singular-value null vectors of `a`. Failed conditions are
/// reported, never thrown; only dimension errors throw.
LiftedSystem build_lift(const Matrix& a, const LiftVectors& lift);

/// As above, with caller-supplied unit null vectors of `a` for the condition
/// report and for the r, s alignment in solve_nullpair.
LiftedSystem build_lift(const Matrix& a, const LiftVectors& lift, const Vector& phi,
                        const Vector& psi);

ConditionReport check_conditions(const Matrix& a, const LiftVectors& lift, const Vector& phi,
                                 const Vector& psi);

/// Nullpair of the lifted matrix via the eigensolver (eigenvalue nearest 0
/// for L and for L^T). Throws DegenerateLift when |xi| or |zeta| is below
/// kDegenerateTol.
NullPair solve_nullpair(const LiftedSystem& sys);

/// alpha = w^T x + omega * xi. The inflated row of L * Phi = 0 forces alpha = 0.
Complex verify_alpha(const LiftedSystem& sys, const NullPair& pair);

struct GramCheck {
    Matrix gram;  // gram(j, i) = Psi_j^T Phi_i
    double sigma_min = 0.0;
    bool nondefective = false;
};

/// Nondefectiveness test for a zero eigenvalue of geometric multiplicity nu:
/// no right null vector may be orthogonal to the whole left null space.
GramCheck gram_nondefect_check(std::span<const Vector> right_null,
                               std::span<const Vector> left_null);

}  // namespace liftkit
