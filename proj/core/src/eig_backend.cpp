#include "liftkit/eig_backend.hpp"

#include <cmath>
#include <random>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace liftkit {

namespace {

// Real input goes through dgeev so that real spectra and conjugate pairs are
// handled as the reference LAPACK driver does.
EigenPairSet geev_real(const Eigen::MatrixXd& m) {
    const auto n = static_cast<lapack_int>(m.rows());
    Eigen::MatrixXd work = m;
    std::vector<double> wr(static_cast<std::size_t>(n));
    std::vector<double> wi(static_cast<std::size_t>(n));
    Eigen::MatrixXd vr(n, n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(),
                                          wi.data(), nullptr, 1, vr.data(), n);
    if (info != 0) {
        throw BackendFailure("eig_all: dgeev failed with info " + std::to_string(info));
    }
    EigenPairSet out;
    out.values.resize(n);
    out.right_vectors.resize(n, n);
    for (lapack_int j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        out.values(j) = Complex(wr[k], wi[k]);
        if (wi[k] == 0.0) {
            out.right_vectors.col(j) = vr.col(j).cast<Complex>();
        } else {
            // Conjugate pair stored as (re, im) in columns j, j+1.
            const Vector v = vr.col(j).cast<Complex>() + Complex(0.0, 1.0) * vr.col(j + 1).cast<Complex>();
            out.values(j + 1) = Complex(wr[k + 1], wi[k + 1]);
            out.right_vectors.col(j) = v;
            out.right_vectors.col(j + 1) = v.conjugate();
            ++j;
        }
    }
    return out;
}

EigenPairSet geev_complex(const Matrix& m) {
    const auto n = static_cast<lapack_int>(m.rows());
    Matrix work = m;
    EigenPairSet out;
    out.values.resize(n);
    out.right_vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n,
                                          out.values.data(), nullptr, 1, out.right_vectors.data(), n);
    if (info != 0) {
        throw BackendFailure("eig_all: zgeev failed with info " + std::to_string(info));
    }
    return out;
}

}  // namespace

EigenPairSet eig_all(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw NonSquare("eig_all: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    }
    if (!all_finite(m)) {
        throw BackendFailure("eig_all: matrix has non-finite entries");
    }

    EigenPairSet out;
    if (m.rows() == 0) {
        return out;
    }

    const bool real_input = m.imag().cwiseAbs().maxCoeff() == 0.0;
    out = real_input ? geev_real(m.real()) : geev_complex(m);
    for (Eigen::Index j = 0; j < out.right_vectors.cols(); ++j) {
        const double norm = out.right_vectors.col(j).norm();
        if (norm > 0.0) {
            out.right_vectors.col(j) /= norm;
        }
    }
    return out;
}

EigenPair nearest_eigenpair(const EigenPairSet& pairs, Complex target) {
    if (pairs.size() == 0) {
        throw Error("nearest_eigenpair: empty eigenpair set");
    }
    Eigen::Index best = 0;
    double best_dist = std::abs(pairs.values(0) - target);
    for (Eigen::Index i = 1; i < pairs.size(); ++i) {
        const double d = std::abs(pairs.values(i) - target);
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return {pairs.values(best), phase_normalize(pairs.right_vectors.col(best)), best};
}

EigenPair left_nullpair(const Matrix& m, Complex target) {
    if (m.rows() != m.cols()) {
        throw NonSquare("left_nullpair: matrix is not square");
    }
    const Matrix transposed = m.transpose();
    return nearest_eigenpair(eig_all(transposed), target);
}

namespace {

bool is_phase_normalized(const Vector& v, Eigen::Index dominant) {
    const Complex d = v(dominant);
    if (d.imag() != 0.0 || !(d.real() > 0.0)) {
        return false;
    }
    return std::abs(v.squaredNorm() - 1.0) <= 4.0 * static_cast<double>(v.size()) * kMachineEps;
}

Eigen::Index dominant_index(const Vector& v) {
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        max_mod = std::max(max_mod, std::abs(v(i)));
    }
    const double cutoff = max_mod * (1.0 - 8.0 * kMachineEps);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= cutoff) {
            return i;
        }
    }
    return 0;
}

}  // namespace

Vector phase_normalize(const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ZeroVector("phase_normalize: zero or non-finite vector");
    }
    const Eigen::Index k = dominant_index(v);
    if (is_phase_normalized(v, k)) {
        return v;
    }
    const Complex rotation = std::conj(v(k)) / std::abs(v(k));
    Vector out = v * (rotation / norm);
    out(k) = Complex(std::abs(out(k)), 0.0);
    return out;
}

SvdNullPair svd_nullpair(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw NonSquare("svd_nullpair: matrix is not square");
    }
    if (m.rows() == 0) {
        throw DimensionMismatch("svd_nullpair: empty matrix");
    }
    if (!all_finite(m)) {
        throw BackendFailure("svd_nullpair: matrix has non-finite entries");
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Index last = m.cols() - 1;
    SvdNullPair out;
    out.sigma_min = svd.singularValues()(last);
    out.right = phase_normalize(svd.matrixV().col(last));
    // A^H u = sigma v, so conj(u)^T A = sigma v^H: the bilinear left nullvector is conj(u).
    out.left = phase_normalize(svd.matrixU().col(last).conjugate());
    return out;
}

Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            g(i, j) = gauss(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    return q.cast<Complex>();
}

double max_residual(const Matrix& m, const EigenPairSet& pairs) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < pairs.size(); ++i) {
        const Vector r = m * pairs.right_vectors.col(i) - pairs.values(i) * pairs.right_vectors.col(i);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

}  // namespace liftkit
