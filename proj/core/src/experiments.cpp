#include "liftkit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "liftkit/eig_backend.hpp"

namespace liftkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio_error(const Vector& u, Complex ratio_ref) {
    if (std::abs(u(0)) < kMachineEps * u.norm()) {
        throw DivisionDegenerate("ratio error: first component vanishes");
    }
    return std::abs(u(1) / u(0) - ratio_ref);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Everything a trial needs that does not depend on the lift vectors.
struct PreparedProblem {
    Matrix a;
    Vector phi;
    Vector psi;
    double baseline = 0.0;
    std::optional<TwoByTwoFamily> small;
    std::optional<LargeTestMatrix> large;

    double error(const NullPair& pair) const {
        return small ? error_2x2(*small, pair) : error_large(*large, pair);
    }
};

// The baseline solves the same shifted matrix the lift is built from.
PreparedProblem prepare(const Problem& problem) {
    PreparedProblem p;
    if (const auto* sp = std::get_if<SmallProblem>(&problem)) {
        p.small = make_2x2(sp->epsilon);
        p.a = p.small->shifted();
        p.phi = p.small->right_nullvector();
        p.psi = p.small->left_nullvector();
        p.baseline = baseline_no_lift(p.a, Complex{}, p.small->ratio_plus);
    } else {
        const auto& lp = std::get<LargeProblem>(problem);
        p.large = make_large(lp.n, lp.epsilon, lp.matrix_seed);
        p.a = p.large->a;
        p.phi = p.large->right_nullvector();
        p.psi = p.large->left_nullvector();
        p.baseline = baseline_no_lift(p.a, Complex{}, p.large->ratio_plus, p.large->q);
    }
    return p;
}

TrialResult run_one(const PreparedProblem& p, double beta, std::uint64_t stream_seed) {
    TrialResult tr;
    tr.seed = stream_seed;
    tr.baseline_error = p.baseline;
    const LiftVectors lift = random_lift_vectors(p.a.rows(), beta, beta, stream_seed);
    const LiftedSystem sys = build_lift(p.a, lift, p.phi, p.psi);
    tr.lifted_norm = sys.lifted.norm();
    try {
        const NullPair pair = solve_nullpair(sys);
        tr.lambda0_abs = std::abs(pair.lambda0);
        tr.cond_recip = condition_s0(pair);
        tr.error = p.error(pair);
    } catch (const DegenerateLift&) {
        tr.flagged = true;
    } catch (const DivisionDegenerate&) {
        tr.flagged = true;
    }
    return tr;
}

}  // namespace

double error_2x2(const TwoByTwoFamily& family, const NullPair& pair) {
    if (pair.original_size() != 2) {
        throw DimensionMismatch("error_2x2: nullpair is not from a 2x2 lift");
    }
    return ratio_error(pair.phi_lifted, family.ratio_plus);
}

double error_large(const LargeTestMatrix& tm, const NullPair& pair) {
    if (pair.original_size() != tm.n) {
        throw DimensionMismatch("error_large: nullpair size does not match the test matrix");
    }
    const Vector u = tm.q * pair.x();
    return ratio_error(u, tm.ratio_plus);
}

double baseline_no_lift(const Matrix& m, Complex mu_plus, Complex ratio_ref,
                        const std::optional<Matrix>& transform) {
    const EigenPair near = nearest_eigenpair(eig_all(m), mu_plus);
    const Vector u = transform ? Vector(*transform * near.vector) : near.vector;
    return ratio_error(u, ratio_ref);
}

double condition_s0(const NullPair& pair) {
    return std::abs(pair.psi_lifted.dot(pair.phi_lifted));
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ trial);
}

std::vector<TrialResult> run_trials(const Problem& problem, double beta, std::size_t n_trials,
                                    std::uint64_t seed, const RunOptions& opts) {
    if (n_trials == 0) {
        throw Error("run_trials: n_trials must be >= 1");
    }
    const PreparedProblem prepared = prepare(problem);
    std::vector<TrialResult> results(n_trials);

    const unsigned workers =
        std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n_trials)));
    if (workers == 1) {
        for (std::size_t t = 0; t < n_trials; ++t) {
            results[t] = run_one(prepared, beta, derive_stream_seed(seed, t));
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < n_trials; t = next++) {
                results[t] = run_one(prepared, beta, derive_stream_seed(seed, t));
            }
        });
    }
    pool.clear();
    return results;
}

TrialStats aggregate(const std::vector<TrialResult>& trials) {
    if (trials.empty()) {
        throw Error("aggregate: no trials");
    }
    TrialStats st;
    st.n_trials = trials.size();
    double sum_err = 0.0;
    double sum_lam = 0.0;
    double sum_s0 = 0.0;
    for (const auto& t : trials) {
        if (t.flagged) {
            ++st.n_flagged;
            continue;
        }
        sum_err += t.error;
        sum_lam += t.lambda0_abs;
        sum_s0 += t.cond_recip;
    }
    const std::size_t used = st.n_trials - st.n_flagged;
    if (used == 0) {
        st.mean_error = st.rms_error = st.mean_lambda0_abs = st.mean_cond_recip = kNaN;
        return st;
    }
    const auto count = static_cast<double>(used);
    st.mean_error = sum_err / count;
    st.mean_lambda0_abs = sum_lam / count;
    st.mean_cond_recip = sum_s0 / count;
    double sq = 0.0;
    for (const auto& t : trials) {
        if (!t.flagged) {
            sq += (t.error - st.mean_error) * (t.error - st.mean_error);
        }
    }
    st.rms_error = std::sqrt(sq / count);
    return st;
}

std::vector<SweepRecord> sweep(const SweepGrid& grid, const Problem& problem_template,
                               std::size_t n_trials, std::uint64_t seed, const RunOptions& opts) {
    if (grid.epsilons.empty() || grid.betas.empty()) {
        throw Error("sweep: empty grid");
    }
    std::vector<SweepRecord> out;
    out.reserve(grid.epsilons.size() * grid.betas.size());
    for (double eps : grid.epsilons) {
        Problem problem = problem_template;
        std::visit([eps](auto& p) { p.epsilon = eps; }, problem);
        for (double beta : grid.betas) {
            const auto trials = run_trials(problem, beta, n_trials, seed, opts);
            const TrialStats st = aggregate(trials);
            SweepRecord rec;
            rec.epsilon = eps;
            rec.beta = beta;
            rec.n_trials = st.n_trials;
            rec.n_flagged = st.n_flagged;
            rec.mean_error = st.mean_error;
            rec.rms_error = st.rms_error;
            rec.mean_lambda0_abs = st.mean_lambda0_abs;
            rec.mean_cond_recip = st.mean_cond_recip;
            rec.baseline_error = trials.front().baseline_error;
            out.push_back(rec);
        }
    }
    return out;
}

std::optional<double> optimal_beta(const std::vector<SweepRecord>& records, double epsilon) {
    std::optional<double> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (r.epsilon == epsilon && r.mean_error < best_err) {
            best_err = r.mean_error;
            best = r.beta;
        }
    }
    return best;
}

unsigned default_thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LIFTKIT_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
            }
        } catch (const std::exception&) {
            // unparsable value: ignore the cap
        }
    }
    return n;
}

}  // namespace liftkit
