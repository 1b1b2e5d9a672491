#include "liftkit/lifting.hpp"

#include <algorithm>

#include "liftkit/eig_backend.hpp"

namespace liftkit {

namespace {

Vector append(const Vector& head, Complex tail) {
    Vector out(head.size() + 1);
    out.head(head.size()) = head;
    out(head.size()) = tail;
    return out;
}

void require_square(const Matrix& a, const char* where) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch(std::string(where) + ": matrix is not square");
    }
}

void require_length(const Vector& v, Eigen::Index n, const char* where, const char* name) {
    if (v.size() != n) {
        throw DimensionMismatch(std::string(where) + ": " + name + " has length " +
                                std::to_string(v.size()) + ", expected " + std::to_string(n));
    }
}

bool nonzero(Complex value, double scale) {
    return std::abs(value) > kConditionTolFactor * kMachineEps * scale;
}

// Alignment scalar c minimizing ||x - c * ref||.
Complex align(const Vector& x, const Vector& ref) {
    const double den = ref.squaredNorm();
    return den > 0.0 ? ref.dot(x) / den : Complex{};
}

}  // namespace

Vector LiftVectors::full_v() const { return append(v, eta); }

Vector LiftVectors::full_w() const { return append(w, omega); }

ConditionReport check_conditions(const Matrix& a, const LiftVectors& lift, const Vector& phi,
                                 const Vector& psi) {
    require_square(a, "check_conditions");
    const Eigen::Index n = a.rows();
    require_length(lift.v, n, "check_conditions", "v");
    require_length(lift.w, n, "check_conditions", "w");
    require_length(phi, n, "check_conditions", "phi");
    require_length(psi, n, "check_conditions", "psi");

    ConditionReport rep;
    rep.w_dot_phi = lift.w.transpose() * phi;
    rep.psi_dot_v = psi.transpose() * lift.v;
    rep.eta_omega = lift.eta * lift.omega;

    const double nphi = phi.norm();
    const double npsi = psi.norm();
    const double nv = lift.v.norm();
    const double nw = lift.w.norm();
    const double neta = std::abs(lift.eta);
    const double nomega = std::abs(lift.omega);

    rep.w_dot_phi_ok = nonzero(rep.w_dot_phi, nw * nphi);
    rep.psi_dot_v_ok = nonzero(rep.psi_dot_v, npsi * nv);
    rep.eta_omega_ok = nonzero(rep.eta_omega, neta * nomega);

    const Complex psi_dot_phi = psi.transpose() * phi;
    if (rep.eta_omega_ok) {
        rep.lifted_inner =
            psi_dot_phi + (rep.psi_dot_v / lift.eta) * (rep.w_dot_phi / lift.omega);
        const double scale = npsi * nphi + (npsi * nv) * (nw * nphi) / (neta * nomega);
        rep.lifted_inner_ok = nonzero(rep.lifted_inner, scale);
    } else {
        rep.lifted_inner = Complex{};
        rep.lifted_inner_ok = false;
    }
    return rep;
}

LiftedSystem build_lift(const Matrix& a, const LiftVectors& lift, const Vector& phi,
                        const Vector& psi) {
    require_square(a, "build_lift");
    const Eigen::Index n = a.rows();
    require_length(lift.v, n, "build_lift", "v");
    require_length(lift.w, n, "build_lift", "w");

    LiftedSystem sys;
    sys.a = a;
    sys.lift = lift;
    sys.lifted = Matrix::Zero(n + 1, n + 1);
    sys.lifted.topLeftCorner(n, n) = a;
    sys.lifted += lift.full_v() * lift.full_w().transpose();
    sys.phi = phi;
    sys.psi = psi;
    sys.reference_supplied = true;
    sys.checks = check_conditions(a, lift, phi, psi);
    return sys;
}

LiftedSystem build_lift(const Matrix& a, const LiftVectors& lift) {
    require_square(a, "build_lift");
    if (a.rows() == 0) {
        throw DimensionMismatch("build_lift: empty matrix");
    }
    const SvdNullPair null = svd_nullpair(a);
    LiftedSystem sys = build_lift(a, lift, null.right, null.left);
    sys.reference_supplied = false;
    return sys;
}

NullPair solve_nullpair(const LiftedSystem& sys) {
    const Eigen::Index n = sys.original_size();
    const EigenPair right = nearest_eigenpair(eig_all(sys.lifted), Complex{});
    const EigenPair left = left_nullpair(sys.lifted, Complex{});

    NullPair pair;
    pair.phi_lifted = right.vector;
    pair.psi_lifted = left.vector;
    pair.lambda0 = right.value;
    pair.lambda0_left = left.value;
    pair.xi = pair.phi_lifted(n);
    pair.zeta = pair.psi_lifted(n);
    if (std::abs(pair.xi) < kDegenerateTol || std::abs(pair.zeta) < kDegenerateTol) {
        throw DegenerateLift("solve_nullpair: inflated components |xi| = " +
                             std::to_string(std::abs(pair.xi)) +
                             ", |zeta| = " + std::to_string(std::abs(pair.zeta)));
    }
    const Vector x = pair.phi_lifted.head(n);
    const Vector y = pair.psi_lifted.head(n);
    // x vanishes only in degenerate cases already rejected above when n > 0.
    pair.recovered_right = phase_normalize(x);
    if (sys.phi.size() == n) {
        pair.r = align(x, sys.phi);
    }
    if (sys.psi.size() == n) {
        pair.s = align(y, sys.psi);
    }
    return pair;
}

Complex verify_alpha(const LiftedSystem& sys, const NullPair& pair) {
    const Eigen::Index n = sys.original_size();
    const Complex wx = sys.lift.w.transpose() * pair.phi_lifted.head(n);
    return wx + sys.lift.omega * pair.phi_lifted(n);
}

GramCheck gram_nondefect_check(std::span<const Vector> right_null,
                               std::span<const Vector> left_null) {
    if (right_null.size() != left_null.size() || right_null.empty()) {
        throw DimensionMismatch("gram_nondefect_check: need equally many (>= 1) right and left "
                                "null vectors");
    }
    const auto nu = static_cast<Eigen::Index>(right_null.size());
    const Eigen::Index dim = right_null.front().size();
    double scale = 0.0;
    for (const auto& v : right_null) {
        require_length(v, dim, "gram_nondefect_check", "right null vector");
    }
    for (const auto& v : left_null) {
        require_length(v, dim, "gram_nondefect_check", "left null vector");
    }

    GramCheck out;
    out.gram.resize(nu, nu);
    for (Eigen::Index j = 0; j < nu; ++j) {
        for (Eigen::Index i = 0; i < nu; ++i) {
            out.gram(j, i) = left_null[j].transpose() * right_null[i];
            scale = std::max(scale, left_null[j].norm() * right_null[i].norm());
        }
    }
    if (nu == 1) {
        out.sigma_min = std::abs(out.gram(0, 0));
    } else {
        Eigen::JacobiSVD<Matrix> svd(out.gram);
        out.sigma_min = svd.singularValues()(nu - 1);
    }
    out.nondefective = out.sigma_min > kConditionTolFactor * kMachineEps * scale;
    return out;
}

}  // namespace liftkit
