#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nmfz/cli.hpp"
#include "nmfz/dataset.hpp"
#include "nmfz/io.hpp"
#include "nmfz/matrix.hpp"
#include "test_helpers.hpp"

namespace {

int run_cli(const std::vector<std::string>& args) { return nmfz::cli::run(args); }

// classes=2, p=12, n-per-class=4, noise=0, seed chosen so that no entry hits
// the [0,1] clamp: the matrix then has rank exactly 2.
const char* kRank2Spec = "classes=2,p=12,n-per-class=4,noise=0,seed=52";

} // namespace

TEST_CASE("cli: inspect prints dataset shape") {
    std::stringstream captured;
    std::streambuf* saved = std::cout.rdbuf(captured.rdbuf());
    const int status =
        run_cli({"inspect", "--synthetic", "classes=5,p=50,n-per-class=10,noise=0.05"});
    std::cout.rdbuf(saved);
    CHECK(status == 0);
    CHECK(captured.str().find("p=50 n=50 classes=5") != std::string::npos);
}

TEST_CASE("cli: inspect reports the protocol dimensions for an ORL tree") {
    testutil::TempDir tmp("cli_orl");
    testutil::write_fake_orl_tree(tmp.path());
    std::stringstream captured;
    std::streambuf* saved = std::cout.rdbuf(captured.rdbuf());
    const int status = run_cli({"inspect", "--orl-dir", tmp.path().string()});
    std::cout.rdbuf(saved);
    CHECK(status == 0);
    CHECK(captured.str().find("p=644 n=400 classes=40") != std::string::npos);
}

TEST_CASE("cli: errors exit nonzero") {
    CHECK(run_cli({"inspect", "--orl-dir", "/nonexistent/path/zzz"}) != 0);
    CHECK(run_cli({"inspect"}) != 0); // no dataset flag
    CHECK(run_cli({"inspect", "--synthetic", "classes=5,p=50,n-per-class=10,bogus=1"}) != 0);
    CHECK(run_cli({"bogus-subcommand"}) != 0);
    CHECK(run_cli({"factorize", "--synthetic", "classes=2,p=8,n-per-class=3,noise=0",
                   "--rank", "2", "--unknown-flag", "--out", "x"}) != 0);
}

TEST_CASE("cli: factorize recovers an exactly factorable synthetic matrix") {
    testutil::TempDir tmp("cli_fact");
    const std::string out = (tmp.path() / "fit").string();

    // guard: the chosen seed must produce an unclamped (exact rank-2) matrix
    const nmfz::LabeledDataset ds = nmfz::synthetic_parts(12, 4, 2, 0.0, 52);
    REQUIRE(nmfz::max_entry(ds.x) < 1.0);

    CHECK(run_cli({"factorize", "--synthetic", kRank2Spec, "--kind", "none", "--rank", "2",
                   "--max-iters", "4000", "--rel-tol", "1e-13", "--seed", "9", "--out", out}) ==
          0);
    CHECK(std::filesystem::exists(out + ".w.csv"));
    CHECK(std::filesystem::exists(out + ".h.csv"));

    // final objective is on the last trace line
    const std::string trace = nmfz::read_text_file(out + ".trace.csv");
    const auto tail = trace.rfind(',');
    const double final_objective = std::stod(trace.substr(tail + 1));
    CHECK(final_objective < 1e-8);
}

TEST_CASE("cli: factorize rejects a rank above min(p, n)") {
    testutil::TempDir tmp("cli_rank");
    CHECK(run_cli({"factorize", "--synthetic", "classes=2,p=8,n-per-class=3,noise=0", "--rank",
                   "7", "--out", (tmp.path() / "x").string()}) != 0);
}

TEST_CASE("cli: factorize znmf echoes the default g") {
    testutil::TempDir tmp("cli_g");
    const std::string out = (tmp.path() / "fit").string();
    CHECK(run_cli({"factorize", "--synthetic", "classes=2,p=8,n-per-class=3,noise=0.05",
                   "--kind", "znmf", "--alpha", "0.45", "--beta", "0.45", "--rank", "2",
                   "--max-iters", "20", "--seed", "1", "--out", out}) == 0);
    // p=8, n=6 -> g = max(6, 64) = 64, echoed in the file header comments
    const std::string w_csv = nmfz::read_text_file(out + ".w.csv");
    CHECK(w_csv.find("# g: 64") != std::string::npos);
}

TEST_CASE("cli: evaluate determinism, replication count, aggregate present") {
    testutil::TempDir tmp("cli_eval");
    const std::string out1 = (tmp.path() / "a.csv").string();
    const std::string out2 = (tmp.path() / "b.csv").string();
    const std::vector<std::string> args{"evaluate",
                                        "--synthetic",
                                        "classes=3,p=30,n-per-class=10,noise=0.05",
                                        "--kind",
                                        "znmf",
                                        "--rank",
                                        "3",
                                        "--alpha",
                                        "0.45",
                                        "--g",
                                        "75",
                                        "--replications",
                                        "3",
                                        "--seed",
                                        "42",
                                        "--max-iters",
                                        "40",
                                        "--feature-iters",
                                        "40"};

    auto with_out = [&](const std::string& out, const std::string& workers) {
        std::vector<std::string> full = args;
        full.insert(full.end(), {"--workers", workers, "--out", out});
        return full;
    };

    CHECK(run_cli(with_out(out1, "1")) == 0);
    CHECK(run_cli(with_out(out2, "2")) == 0);
    CHECK(nmfz::read_text_file(out1) == nmfz::read_text_file(out2));
    CHECK(nmfz::read_text_file(tmp.path() / "a.agg.csv") ==
          nmfz::read_text_file(tmp.path() / "b.agg.csv"));

    // 3 detail rows + header + comment; beta defaulted to alpha
    const std::string detail = nmfz::read_text_file(out1);
    CHECK(detail.find("# invocation: evaluate") != std::string::npos);
    std::size_t lines = 0;
    for (char c : detail) lines += c == '\n';
    CHECK(lines == 5);
    CHECK(detail.find("znmf,3,0.45,0.45,75,") != std::string::npos);

    // a single replication produces exactly one detail row
    const std::string out3 = (tmp.path() / "c.csv").string();
    std::vector<std::string> single = with_out(out3, "1");
    single[12] = "1"; // --replications value
    CHECK(run_cli(single) == 0);
    std::size_t rows = 0;
    for (char c : nmfz::read_text_file(out3)) rows += c == '\n';
    CHECK(rows == 3);
}

TEST_CASE("cli: sweep grid counting, complement regime, worker independence") {
    testutil::TempDir tmp("cli_sweep");
    const std::string out1 = (tmp.path() / "s1.csv").string();
    const std::string out2 = (tmp.path() / "s2.csv").string();

    auto sweep_args = [&](const std::string& out, const std::string& workers) {
        return std::vector<std::string>{
            "sweep",   "--synthetic",    "classes=3,p=30,n-per-class=10,noise=0.05",
            "--kind",  "znmf",           "--ranks",
            "3",       "--alphas",       "0.4:0.6:0.05",
            "--regime", "complement",    "--g",
            "60:90:5", "--replications", "2",
            "--seed",  "7",              "--max-iters",
            "25",      "--feature-iters", "25",
            "--workers", workers,        "--out",
            out};
    };

    CHECK(run_cli(sweep_args(out1, "1")) == 0);
    CHECK(run_cli(sweep_args(out2, "4")) == 0);
    CHECK(nmfz::read_text_file(out1) == nmfz::read_text_file(out2));
    CHECK(nmfz::read_text_file(tmp.path() / "s1.agg.csv") ==
          nmfz::read_text_file(tmp.path() / "s2.agg.csv"));

    // 5 alphas x 7 g x 2 reps = 70 detail rows (+ comment + header)
    const std::string detail = nmfz::read_text_file(out1);
    std::size_t lines = 0;
    for (char c : detail) lines += c == '\n';
    CHECK(lines == 72);

    // complement regime: alpha 0.6 rows carry beta 0.4
    CHECK(detail.find("znmf,3,0.6,0.4,") != std::string::npos);
}

TEST_CASE("cli: sweep rejects --g for non-zellner kinds") {
    testutil::TempDir tmp("cli_gkind");
    CHECK(run_cli({"sweep", "--synthetic", "classes=2,p=8,n-per-class=3,noise=0", "--kind",
                   "cnmf", "--ranks", "2", "--alphas", "0.5", "--g", "75", "--out",
                   (tmp.path() / "x.csv").string()}) != 0);
}
