#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "liftkit/lifting.hpp"
#include "liftkit/matgen.hpp"

namespace liftkit {

struct TrialResult {
    double error = 0.0;
    double lambda0_abs = 0.0;
    double cond_recip = 0.0;  // s(0) = |Psi^H Phi|
    double baseline_error = 0.0;
    double lifted_norm = 0.0;  // ||L||_F
    std::uint64_t seed = 0;
    bool flagged = false;  // DegenerateLift / DivisionDegenerate: excluded from statistics
};

struct TrialStats {
    std::size_t n_trials = 0;
    std::size_t n_flagged = 0;
    double mean_error = 0.0;
    double rms_error = 0.0;  // root-mean-square deviation about the mean
    double mean_lambda0_abs = 0.0;
    double mean_cond_recip = 0.0;
};

struct SweepRecord {
    double epsilon = 0.0;
    double beta = 0.0;
    std::size_t n_trials = 0;
    std::size_t n_flagged = 0;
    double mean_error = 0.0;
    double rms_error = 0.0;
    double mean_lambda0_abs = 0.0;
    double mean_cond_recip = 0.0;
    double baseline_error = 0.0;
};

struct SmallProblem {
    double epsilon = 0.0;
};

struct LargeProblem {
    Eigen::Index n = 100;
    double epsilon = 0.0;
    std::uint64_t matrix_seed = 7;
};

using Problem = std::variant<SmallProblem, LargeProblem>;

/// |Phi_2 / Phi_1 - (mu_plus - pi)| on the lifted right nullvector.
double error_2x2(const TwoByTwoFamily& family, const NullPair& pair);

/// Same ratio error after mapping x back through the similarity: u = q x.
double error_large(const LargeTestMatrix& tm, const NullPair& pair);

/// Ratio error of the eigenvector of `m` nearest mu_plus computed directly,
/// optionally mapped through `transform`. Trial runs pass the shifted matrix
/// with target 0, the same input the lift sees.
double baseline_no_lift(const Matrix& m, Complex mu_plus, Complex ratio_ref,
                        const std::optional<Matrix>& transform = std::nullopt);

/// |Psi^H Phi|; the condition number of the simple zero eigenvalue is its reciprocal.
double condition_s0(const NullPair& pair);

/// Per-trial randomness comes from derive_stream_seed(seed, t), so results do
/// not depend on how trials are scheduled.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t trial);

struct RunOptions {
    unsigned threads = 1;
};

/// n_trials random lifts with gamma = beta. A trial whose lift degenerates is
/// returned with flagged = true.
std::vector<TrialResult> run_trials(const Problem& problem, double beta, std::size_t n_trials,
                                    std::uint64_t seed, const RunOptions& opts = {});

TrialStats aggregate(const std::vector<TrialResult>& trials);

struct SweepGrid {
    std::vector<double> epsilons;
    std::vector<double> betas;
};

/// One record per (epsilon, beta) cell, epsilon outer and beta inner. The
/// template's epsilon is replaced by the grid value; every cell uses `seed`.
std::vector<SweepRecord> sweep(const SweepGrid& grid, const Problem& problem_template,
                               std::size_t n_trials, std::uint64_t seed,
                               const RunOptions& opts = {});

/// Beta with the smallest mean error among records for `epsilon`.
std::optional<double> optimal_beta(const std::vector<SweepRecord>& records, double epsilon);

/// Number of worker threads: hardware concurrency, capped by LIFTKIT_THREADS when set.
unsigned default_thread_count();

}  // namespace liftkit
