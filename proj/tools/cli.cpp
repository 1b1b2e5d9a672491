#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "liftkit/eig_backend.hpp"
#include "liftkit/experiments.hpp"
#include "liftkit/io.hpp"
#include "liftkit/lifting.hpp"
#include "liftkit/matgen.hpp"

namespace liftkit::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using io::format_double;

double to_double(const std::string& tok) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw UsageError("not a number: '" + tok + "'");
    }
    return v;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) {
        out.push_back(item);
    }
    return out;
}

Complex parse_mu(const std::string& s) {
    const auto parts = split_on(s, ',');
    if (parts.size() == 1) {
        return {to_double(parts[0]), 0.0};
    }
    if (parts.size() == 2) {
        return {to_double(parts[0]), to_double(parts[1])};
    }
    throw UsageError("--mu expects RE or RE,IM");
}

// Comma-separated numbers, or log:START:STOP:COUNT for COUNT log-spaced
// values between 10^START and 10^STOP inclusive.
std::vector<double> parse_list(const std::string& s) {
    if (s.rfind("log:", 0) == 0) {
        const auto parts = split_on(s.substr(4), ':');
        if (parts.size() != 3) {
            throw UsageError("expected log:START:STOP:COUNT, got '" + s + "'");
        }
        const double lo = to_double(parts[0]);
        const double hi = to_double(parts[1]);
        const double count = to_double(parts[2]);
        if (count < 1 || count != std::floor(count)) {
            throw UsageError("log list COUNT must be a positive integer");
        }
        const auto k = static_cast<int>(count);
        std::vector<double> out;
        for (int i = 0; i < k; ++i) {
            const double e = k == 1 ? lo : lo + (hi - lo) * i / (k - 1);
            out.push_back(std::pow(10.0, e));
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& tok : split_on(s, ',')) {
        out.push_back(to_double(tok));
    }
    if (out.empty()) {
        throw UsageError("empty list");
    }
    return out;
}

std::string complex_str(Complex z) { return format_double(z.real()) + " " + format_double(z.imag()); }

const char* flag(bool ok) { return ok ? "pass" : "FAIL"; }

void print_record(std::ostream& out, const SweepRecord& r) {
    out << "epsilon " << format_double(r.epsilon) << '\n'
        << "beta " << format_double(r.beta) << '\n'
        << "n_trials " << r.n_trials << '\n'
        << "n_flagged " << r.n_flagged << '\n'
        << "mean_error " << format_double(r.mean_error) << '\n'
        << "rms_error " << format_double(r.rms_error) << '\n'
        << "mean_lambda0_abs " << format_double(r.mean_lambda0_abs) << '\n'
        << "mean_cond_recip " << format_double(r.mean_cond_recip) << '\n'
        << "baseline_error " << format_double(r.baseline_error) << '\n';
}

struct LiftArgs {
    std::string matrix;
    std::string mu = "0";
    double beta = 1.0;
    double gamma = 1.0;
    unsigned long long seed = kDefaultSeed;
    std::string vectors;
    std::string strategy = "random";
    std::string out = "recovered_nullvector.mtx";
};

int run_lift(const LiftArgs& args, std::ostream& out) {
    const Matrix m = io::read_matrix(args.matrix);
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw UsageError("--matrix must be a non-empty square matrix");
    }
    const Complex mu = parse_mu(args.mu);
    const Eigen::Index n = m.rows();
    const Matrix a = m - mu * Matrix::Identity(n, n);

    LiftVectors lift;
    if (!args.vectors.empty()) {
        const Matrix vw = io::read_matrix(args.vectors);
        if (vw.rows() != n + 1 || vw.cols() != 2) {
            throw UsageError("--vectors must be an (N+1)x2 matrix holding (v, eta) and (w, omega)");
        }
        lift.v = vw.col(0).head(n);
        lift.eta = vw(n, 0);
        lift.w = vw.col(1).head(n);
        lift.omega = vw(n, 1);
        lift.strategy = LiftStrategy::Custom;
    } else if (args.strategy == "adjoint") {
        const SvdNullPair null = svd_nullpair(a);
        lift = adjoint_lift_vectors(null.right, null.left, args.beta);
    } else if (args.strategy == "random") {
        lift = random_lift_vectors(n, args.beta, args.gamma, args.seed);
    } else {
        throw UsageError("--strategy must be random or adjoint");
    }

    const LiftedSystem sys = build_lift(a, lift);
    const ConditionReport& c = sys.checks;
    out << "n " << n << '\n'
        << "mu " << complex_str(mu) << '\n'
        << "cond.w_dot_phi " << complex_str(c.w_dot_phi) << ' ' << flag(c.w_dot_phi_ok) << '\n'
        << "cond.psi_dot_v " << complex_str(c.psi_dot_v) << ' ' << flag(c.psi_dot_v_ok) << '\n'
        << "cond.eta_omega " << complex_str(c.eta_omega) << ' ' << flag(c.eta_omega_ok) << '\n'
        << "cond.lifted_inner " << complex_str(c.lifted_inner) << ' ' << flag(c.lifted_inner_ok)
        << '\n'
        << "conditions " << flag(c.passed()) << '\n';

    std::optional<NullPair> pair;
    try {
        pair = solve_nullpair(sys);
    } catch (const DegenerateLift& e) {
        out << "nullpair degenerate\n";
    }
    if (pair) {
        out << "lambda0 " << complex_str(pair->lambda0) << '\n'
            << "xi " << complex_str(pair->xi) << '\n'
            << "zeta " << complex_str(pair->zeta) << '\n'
            << "s0 " << format_double(condition_s0(*pair)) << '\n'
            << "alpha " << complex_str(verify_alpha(sys, *pair)) << '\n'
            << "nullvector " << args.out << '\n';
        io::write_matrix(Matrix(pair->recovered_right), args.out, io::MatrixFormat::Array,
                         io::MatrixField::Complex);
    }
    if (!c.passed()) {
        return kExitConditionsFailed;
    }
    return pair ? kExitOk : kExitDegenerateLift;
}

struct DemoArgs {
    double epsilon = 0.0;
    double beta = 1.0;
    std::size_t trials = 1000;
    unsigned long long seed = kDefaultSeed;
    Eigen::Index n = 100;
    unsigned long long matrix_seed = 7;
};

int run_demo(const Problem& problem, const DemoArgs& args, std::ostream& out) {
    const SweepGrid grid{{args.epsilon}, {args.beta}};
    const auto records = sweep(grid, problem, args.trials, args.seed, {default_thread_count()});
    print_record(out, records.front());
    return kExitOk;
}

struct SweepArgs {
    std::string problem = "small";
    std::string epsilons = "1e-14,1e-12,1e-10,1e-8,1e-6";
    std::string betas = "log:-3:2:11";
    std::size_t trials = 1000;
    unsigned long long seed = kDefaultSeed;
    std::string out;
    Eigen::Index n = 100;
    unsigned long long matrix_seed = 7;
};

int run_sweep(const SweepArgs& args, std::ostream& out) {
    SweepGrid grid{parse_list(args.epsilons), parse_list(args.betas)};
    Problem problem;
    if (args.problem == "small") {
        problem = SmallProblem{};
    } else if (args.problem == "large") {
        problem = LargeProblem{args.n, 0.0, args.matrix_seed};
    } else {
        throw UsageError("--problem must be small or large");
    }
    const auto records = sweep(grid, problem, args.trials, args.seed, {default_thread_count()});
    io::emit_csv(records, args.out);
    out << "records " << records.size() << '\n' << "csv " << args.out << '\n';
    for (double eps : grid.epsilons) {
        if (const auto best = optimal_beta(records, eps)) {
            out << "optimal_beta " << format_double(eps) << ' ' << format_double(*best) << '\n';
        }
    }
    return kExitOk;
}

struct GenArgs {
    std::string family = "m2x2";
    double epsilon = 0.0;
    Eigen::Index n = 100;
    unsigned long long seed = 7;
    std::string out;
    std::string transform_out;
    std::string format = "array";
};

int run_gen(const GenArgs& args, std::ostream& out) {
    io::MatrixFormat format{};
    if (args.format == "array") {
        format = io::MatrixFormat::Array;
    } else if (args.format == "coordinate") {
        format = io::MatrixFormat::Coordinate;
    } else {
        throw UsageError("--format must be array or coordinate");
    }

    if (args.family == "m2x2") {
        const TwoByTwoFamily f = make_2x2(args.epsilon);
        io::write_matrix(f.m, args.out, format);
        out << "mu_plus " << complex_str(f.mu_plus) << '\n'
            << "ratio_plus " << complex_str(f.ratio_plus) << '\n';
    } else if (args.family == "large") {
        const LargeTestMatrix tm = make_large(args.n, args.epsilon, args.seed);
        io::write_matrix(tm.unshifted, args.out, format);
        if (!args.transform_out.empty()) {
            io::write_matrix(tm.q, args.transform_out, format);
        }
        out << "mu_plus " << complex_str(tm.mu_plus) << '\n'
            << "ratio_plus " << complex_str(tm.ratio_plus) << '\n'
            << "poisson " << (tm.layout == PoissonLayout::Auto ? "auto" : "1d") << '\n';
    } else if (args.family == "poisson") {
        io::write_matrix(poisson_block(args.n), args.out, format);
    } else {
        throw UsageError("--family must be m2x2, large or poisson");
    }
    out << "matrix " << args.out << '\n';
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lifting of defective eigenvalue problems", "liftkit"};
    app.require_subcommand(1);

    LiftArgs lift;
    auto* lift_cmd = app.add_subcommand("lift", "Lift a matrix at shift mu and recover its nullvector");
    lift_cmd->add_option("--matrix", lift.matrix, "Matrix Market file")->required();
    lift_cmd->add_option("--mu", lift.mu, "Shift RE[,IM]; the lift is built for M - mu I");
    lift_cmd->add_option("--beta", lift.beta, "Scale of v")->capture_default_str();
    lift_cmd->add_option("--gamma", lift.gamma, "Scale of w")->capture_default_str();
    lift_cmd->add_option("--seed", lift.seed, "Seed for random lift vectors")->capture_default_str();
    lift_cmd->add_option("--strategy", lift.strategy, "random | adjoint")->capture_default_str();
    auto* vec_opt = lift_cmd->add_option(
        "--vectors", lift.vectors, "(N+1)x2 Matrix Market file with columns (v, eta) and (w, omega)");
    vec_opt->excludes("--strategy");
    lift_cmd->add_option("--out", lift.out, "Where to write the recovered nullvector")
        ->capture_default_str();

    DemoArgs demo2;
    auto* demo2_cmd = app.add_subcommand("demo2x2", "Random-lift trials on the 2x2 family");
    demo2_cmd->add_option("--epsilon", demo2.epsilon)->capture_default_str();
    demo2_cmd->add_option("--beta", demo2.beta)->capture_default_str();
    demo2_cmd->add_option("--trials", demo2.trials)->capture_default_str()->check(CLI::PositiveNumber);
    demo2_cmd->add_option("--seed", demo2.seed)->capture_default_str();

    DemoArgs demon;
    demon.epsilon = 1e-12;
    demon.trials = 50;
    auto* demon_cmd = app.add_subcommand("demoN", "Random-lift trials on the N x N test matrix");
    demon_cmd->add_option("--n", demon.n)->capture_default_str()->check(CLI::Range(3, 100000));
    demon_cmd->add_option("--epsilon", demon.epsilon)->capture_default_str();
    demon_cmd->add_option("--beta", demon.beta)->capture_default_str();
    demon_cmd->add_option("--trials", demon.trials)->capture_default_str()->check(CLI::PositiveNumber);
    demon_cmd->add_option("--seed", demon.seed)->capture_default_str();
    demon_cmd->add_option("--matrix-seed", demon.matrix_seed)->capture_default_str();

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid of (epsilon, beta) cells written as CSV");
    sweep_cmd->add_option("--problem", sw.problem, "small | large")->capture_default_str();
    sweep_cmd->add_option("--epsilons", sw.epsilons, "List or log:START:STOP:COUNT")->capture_default_str();
    sweep_cmd->add_option("--betas", sw.betas, "List or log:START:STOP:COUNT")->capture_default_str();
    sweep_cmd->add_option("--trials", sw.trials)->capture_default_str()->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sw.seed)->capture_default_str();
    sweep_cmd->add_option("--out", sw.out, "CSV output path")->required();
    sweep_cmd->add_option("--n", sw.n, "Size of the large problem")->capture_default_str()->check(CLI::Range(3, 100000));
    sweep_cmd->add_option("--matrix-seed", sw.matrix_seed)->capture_default_str();

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a test matrix");
    gen_cmd->add_option("--family", gen.family, "m2x2 | large | poisson")->capture_default_str();
    gen_cmd->add_option("--epsilon", gen.epsilon)->capture_default_str();
    gen_cmd->add_option("--n", gen.n, "Order (large: N, poisson: block order)")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Similarity-transform seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Matrix Market output")->required();
    gen_cmd->add_option("--transform-out", gen.transform_out, "Also write the similarity transform");
    gen_cmd->add_option("--format", gen.format, "array | coordinate")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*lift_cmd) {
            return run_lift(lift, out);
        }
        if (*demo2_cmd) {
            return run_demo(SmallProblem{demo2.epsilon}, demo2, out);
        }
        if (*demon_cmd) {
            return run_demo(LargeProblem{demon.n, demon.epsilon, demon.matrix_seed}, demon, out);
        }
        if (*sweep_cmd) {
            return run_sweep(sw, out);
        }
        if (*gen_cmd) {
            return run_gen(gen, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace liftkit::cli
