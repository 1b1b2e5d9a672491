#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "liftkit/io.hpp"
#include "liftkit/matgen.hpp"

using namespace liftkit;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path tmp_path(const std::string& name) {
    const fs::path dir = fs::path(LIFTKIT_TEST_TMPDIR) / "cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(key + " ", 0) == 0) {
            return line.substr(key.size() + 1);
        }
    }
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli: gen then lift the defective 2x2 matrix") {
    const fs::path m = tmp_path("m0.mtx");
    const fs::path nv = tmp_path("nv.mtx");
    const Run gen = run({"gen", "--family", "m2x2", "--epsilon", "0", "--out", m.string()});
    REQUIRE(gen.code == cli::kExitOk);
    CHECK(value_of(gen.out, "mu_plus") == "1.5707963267948966 0");

    const Run lift = run({"lift", "--matrix", m.string(), "--mu", "1.5707963267948966", "--beta", "1",
                          "--gamma", "1", "--seed", "3", "--out", nv.string()});
    CHECK(lift.code == cli::kExitOk);
    CHECK(value_of(lift.out, "conditions") == "pass");
    const Matrix x = io::read_matrix(nv);
    REQUIRE(x.rows() == 2);
    const Complex ratio = x(1, 0) / x(0, 0);
    CHECK(std::abs(ratio - make_2x2(0.0).ratio_plus) <= 1e-12);

    const Run adj = run({"lift", "--matrix", m.string(), "--mu", "1.5707963267948966", "--strategy",
                         "adjoint", "--out", nv.string()});
    CHECK(adj.code == cli::kExitOk);
}

TEST_CASE("cli: pathological lift vectors fail the guard with exit 2") {
    const TwoByTwoFamily f = make_2x2(0.0);
    const fs::path m = tmp_path("m0p.mtx");
    const fs::path vecs = tmp_path("pathological.mtx");
    io::write_matrix(f.m, m);

    const Vector phi = f.right_nullvector();
    Vector w(2);
    w << 0.6, -0.8;
    Matrix vw(3, 2);
    vw.col(0).head(2) = phi;
    vw(2, 0) = -1.0;
    vw.col(1).head(2) = w;
    vw(2, 1) = Complex(w.transpose() * phi);
    io::write_matrix(vw, vecs);

    const Run r = run({"lift", "--matrix", m.string(), "--mu", "1.5707963267948966", "--vectors",
                       vecs.string(), "--out", tmp_path("unused.mtx").string()});
    CHECK(r.code == cli::kExitConditionsFailed);
    CHECK(value_of(r.out, "cond.lifted_inner").ends_with("FAIL"));
    CHECK(value_of(r.out, "conditions") == "FAIL");
}

TEST_CASE("cli: degenerate lift exits 3") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    const fs::path m = tmp_path("diag.mtx");
    io::write_matrix(a, m);
    // All conditions hold (psi^T phi = 1) but omega >> w^T phi drives xi below tolerance.
    Matrix vw(3, 2);
    vw << 1.0, 1.0, 1.0, 1.0, 1.0, 1e20;
    const fs::path vecs = tmp_path("degenerate.mtx");
    io::write_matrix(vw, vecs);
    const Run r = run({"lift", "--matrix", m.string(), "--vectors", vecs.string(), "--out",
                       tmp_path("deg_nv.mtx").string()});
    CHECK(r.code == cli::kExitDegenerateLift);
    CHECK(r.out.find("nullpair degenerate") != std::string::npos);
}

TEST_CASE("cli: demo2x2 on the defective problem") {
    const Run r = run({"demo2x2", "--epsilon", "0", "--beta", "1", "--trials", "1000", "--seed", "42"});
    REQUIRE(r.code == cli::kExitOk);
    const double mean = std::stod(value_of(r.out, "mean_error"));
    CHECK(mean <= 1e-12);
}

TEST_CASE("cli: sweep with a 1x1 grid matches demo2x2") {
    const fs::path csv = tmp_path("one_cell.csv");
    const Run s = run({"sweep", "--problem", "small", "--epsilons", "1e-10", "--betas", "0.5",
                       "--trials", "300", "--seed", "9", "--out", csv.string()});
    REQUIRE(s.code == cli::kExitOk);
    const Run d = run({"demo2x2", "--epsilon", "1e-10", "--beta", "0.5", "--trials", "300", "--seed", "9"});
    REQUIRE(d.code == cli::kExitOk);
    const auto recs = io::read_csv(csv);
    REQUIRE(recs.size() == 1);
    CHECK(io::format_double(recs[0].mean_error) == value_of(d.out, "mean_error"));
    CHECK(io::format_double(recs[0].rms_error) == value_of(d.out, "rms_error"));
    CHECK(io::format_double(recs[0].baseline_error) == value_of(d.out, "baseline_error"));
}

TEST_CASE("cli: identical flags give byte-identical outputs") {
    const fs::path a = tmp_path("det_a.csv");
    const fs::path b = tmp_path("det_b.csv");
    const std::vector<std::string> base{"sweep", "--problem", "large", "--n", "8", "--epsilons",
                                        "1e-12,1e-8", "--betas", "log:-2:0:3", "--trials", "5",
                                        "--seed", "4", "--out"};
    auto args_a = base;
    args_a.push_back(a.string());
    auto args_b = base;
    args_b.push_back(b.string());
    REQUIRE(run(args_a).code == cli::kExitOk);
    REQUIRE(run(args_b).code == cli::kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(io::read_csv(a).size() == 6);

    const Run d1 = run({"demoN", "--n", "10", "--trials", "4"});
    const Run d2 = run({"demoN", "--n", "10", "--trials", "4"});
    CHECK(d1.code == cli::kExitOk);
    CHECK(d1.out == d2.out);
}

TEST_CASE("cli: gen large and poisson") {
    const fs::path m = tmp_path("large.mtx");
    const fs::path q = tmp_path("large_q.mtx");
    const Run g = run({"gen", "--family", "large", "--n", "12", "--epsilon", "1e-12", "--seed", "3",
                       "--out", m.string(), "--transform-out", q.string()});
    REQUIRE(g.code == cli::kExitOk);
    const LargeTestMatrix tm = make_large(12, 1e-12, 3);
    CHECK(io::read_matrix(m) == tm.unshifted);
    CHECK(io::read_matrix(q) == tm.q);

    const fs::path p = tmp_path("poisson.mtx");
    REQUIRE(run({"gen", "--family", "poisson", "--n", "6", "--format", "coordinate", "--out", p.string()}).code ==
            cli::kExitOk);
    CHECK(io::read_matrix(p) == poisson_block(6));
}

TEST_CASE("cli: usage and file errors") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"demo2x2", "--trials", "0"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--out", tmp_path("x.csv").string(), "--problem", "medium"}).code ==
          cli::kExitUsage);
    CHECK(run({"lift", "--matrix", tmp_path("nope.mtx").string()}).code == cli::kExitIo);

    const fs::path bad = tmp_path("bad.mtx");
    std::ofstream(bad) << "%%MatrixMarket matrix array real general\n2 2\n1\n";
    const Run r = run({"lift", "--matrix", bad.string()});
    CHECK(r.code == cli::kExitIo);
    CHECK(r.err.find("line 4") != std::string::npos);

    const fs::path good = tmp_path("good.mtx");
    std::ofstream(good) << "%%MatrixMarket matrix array real general\n1 1\n1\n";
    CHECK(run({"lift", "--matrix", good.string(), "--mu", "1,2,3"}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == 0);
}
