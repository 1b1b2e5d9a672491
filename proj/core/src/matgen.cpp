#include "liftkit/matgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "liftkit/eig_backend.hpp"

namespace liftkit {

namespace {

constexpr double kPi = std::numbers::pi;

Vector unit(Vector v) { return v / v.norm(); }

// Largest divisor p of m with 1 < p <= sqrt(m), or 1 when m is prime (or < 4).
Eigen::Index grid_rows(Eigen::Index m) {
    for (Eigen::Index p = static_cast<Eigen::Index>(std::sqrt(static_cast<double>(m))); p > 1; --p) {
        if (m % p == 0) {
            return p;
        }
    }
    return 1;
}

Vector embed(const Vector& head, Eigen::Index n) {
    Vector out = Vector::Zero(n);
    out.head(head.size()) = head;
    return out;
}

}  // namespace

Matrix TwoByTwoFamily::shifted() const { return m - mu_plus * Matrix::Identity(2, 2); }

Vector TwoByTwoFamily::right_nullvector() const {
    Vector v(2);
    v << Complex(1.0, 0.0), ratio_plus;
    return unit(v);
}

Vector TwoByTwoFamily::left_nullvector() const {
    Vector v(2);
    v << mu_plus - epsilon, Complex(1.0, 0.0);
    return unit(v);
}

TwoByTwoFamily make_2x2(double epsilon) {
    if (!std::isfinite(epsilon)) {
        throw Error("make_2x2: epsilon must be finite");
    }
    TwoByTwoFamily f;
    f.epsilon = epsilon;
    f.m.resize(2, 2);
    f.m << Complex(kPi, 0.0), Complex(1.0, 0.0), Complex(-kPi * kPi / 4.0, 0.0),
        Complex(epsilon, 0.0);
    // The discriminant is negative for 0 < eps < 2 pi, giving a complex pair.
    const Complex root = std::sqrt(Complex(epsilon * epsilon - 2.0 * kPi * epsilon, 0.0));
    f.mu_plus = (kPi + epsilon + root) / 2.0;
    f.mu_minus = (kPi + epsilon - root) / 2.0;
    f.ratio_plus = f.mu_plus - kPi;
    return f;
}

Matrix poisson_block(Eigen::Index m, PoissonLayout layout) {
    if (m < 1) {
        throw DimensionMismatch("poisson_block: order must be >= 1");
    }
    const Eigen::Index p = layout == PoissonLayout::Auto ? grid_rows(m) : 1;
    Matrix out = Matrix::Zero(m, m);
    if (p == 1) {
        for (Eigen::Index i = 0; i < m; ++i) {
            out(i, i) = 2.0;
            if (i + 1 < m) {
                out(i, i + 1) = -1.0;
                out(i + 1, i) = -1.0;
            }
        }
        return out;
    }
    const Eigen::Index q = m / p;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < q; ++j) {
            const Eigen::Index k = i * q + j;
            out(k, k) = 4.0;
            if (j + 1 < q) {
                out(k, k + 1) = -1.0;
                out(k + 1, k) = -1.0;
            }
            if (i + 1 < p) {
                out(k, k + q) = -1.0;
                out(k + q, k) = -1.0;
            }
        }
    }
    return out;
}

Eigen::VectorXd poisson_eigenvalues(Eigen::Index m, PoissonLayout layout) {
    if (m < 1) {
        throw DimensionMismatch("poisson_eigenvalues: order must be >= 1");
    }
    const Eigen::Index p = layout == PoissonLayout::Auto ? grid_rows(m) : 1;
    Eigen::VectorXd out(m);
    if (p == 1) {
        for (Eigen::Index k = 1; k <= m; ++k) {
            out(k - 1) = 2.0 - 2.0 * std::cos(static_cast<double>(k) * kPi / static_cast<double>(m + 1));
        }
    } else {
        const Eigen::Index q = m / p;
        Eigen::Index idx = 0;
        for (Eigen::Index i = 1; i <= p; ++i) {
            for (Eigen::Index j = 1; j <= q; ++j) {
                out(idx++) = 4.0 - 2.0 * std::cos(static_cast<double>(i) * kPi / static_cast<double>(p + 1)) -
                             2.0 * std::cos(static_cast<double>(j) * kPi / static_cast<double>(q + 1));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Vector LargeTestMatrix::right_nullvector() const {
    const Vector head = make_2x2(epsilon).right_nullvector();
    return unit(q.transpose() * embed(head, n));
}

Vector LargeTestMatrix::left_nullvector() const {
    const Vector head = make_2x2(epsilon).left_nullvector();
    return unit(q.transpose() * embed(head, n));
}

LargeTestMatrix make_large(Eigen::Index n, double epsilon, std::uint64_t seed) {
    if (n < 3) {
        throw DimensionMismatch("make_large: n must be >= 3");
    }
    const TwoByTwoFamily small = make_2x2(epsilon);

    auto separated = [&](PoissonLayout layout) {
        const Eigen::VectorXd ev = poisson_eigenvalues(n - 2, layout);
        double gap = std::numeric_limits<double>::infinity();
        for (double lam : ev) {
            gap = std::min(gap, std::abs(Complex(lam, 0.0) - small.mu_plus));
        }
        return gap > kSpectralSeparation;
    };

    PoissonLayout layout = PoissonLayout::Auto;
    if (!separated(layout)) {
        layout = PoissonLayout::OneD;
        if (!separated(layout)) {
            throw SpectralCollision("make_large: Poisson block has an eigenvalue within 1e-3 of mu_plus");
        }
    }

    Matrix c = Matrix::Zero(n, n);
    c.topLeftCorner(2, 2) = small.m;
    c.bottomRightCorner(n - 2, n - 2) = poisson_block(n - 2, layout);

    LargeTestMatrix tm;
    tm.n = n;
    tm.epsilon = epsilon;
    tm.seed = seed;
    tm.layout = layout;
    tm.mu_plus = small.mu_plus;
    tm.ratio_plus = small.ratio_plus;
    tm.q = random_orthogonal(n, seed);
    const Matrix qt = tm.q.transpose();
    tm.unshifted = qt * c * tm.q;
    tm.a = qt * (c - small.mu_plus * Matrix::Identity(n, n)) * tm.q;
    return tm;
}

LiftVectors random_lift_vectors(Eigen::Index n, double beta, double gamma, std::uint64_t seed) {
    if (n < 1) {
        throw DimensionMismatch("random_lift_vectors: n must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    auto draw = [&] {
        Eigen::VectorXd r(n);
        do {
            for (Eigen::Index i = 0; i < n; ++i) {
                r(i) = uniform(rng);
            }
        } while (r.norm() == 0.0);
        return Vector((r / r.norm()).cast<Complex>());
    };

    LiftVectors lift;
    const Vector v_r = draw();
    const Vector w_r = draw();
    lift.v = beta * v_r;
    lift.w = gamma * w_r;
    lift.eta = 1.0;
    lift.omega = 1.0;
    lift.beta = beta;
    lift.gamma = gamma;
    lift.strategy = LiftStrategy::Random;
    lift.seed = seed;
    return lift;
}

LiftVectors adjoint_lift_vectors(const Vector& phi, const Vector& psi, double beta) {
    if (phi.size() != psi.size()) {
        throw DimensionMismatch("adjoint_lift_vectors: phi and psi differ in length");
    }
    LiftVectors lift;
    lift.v = beta * psi.conjugate();
    lift.w = beta * phi.conjugate();
    lift.eta = 1.0;
    lift.omega = 1.0;
    lift.beta = beta;
    lift.gamma = beta;
    lift.strategy = LiftStrategy::AdjointNullvectors;
    return lift;
}

}  // namespace liftkit
