#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hyplab/csv.hpp"
#include "hyplab/experiment.hpp"
#include "hyplab/mlp.hpp"

#ifndef HYPLAB_CLI_PATH
#error "HYPLAB_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const auto d = fs::temp_directory_path() / "hyplab_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto out = work_dir() / ("stdout" + std::to_string(counter) + ".txt");
    const auto err = work_dir() / ("stderr" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(HYPLAB_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    CliResult result;
    result.status = rc == -1 ? -1 : WEXITSTATUS(rc);
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("solve-fv --help").status == 0);
    CHECK(run_cli("experiment --help").status == 0);
}

TEST_CASE("solve-fv writes a parsable solution") {
    const auto path = work_dir() / "sol.csv";
    const auto result = run_cli(
        "solve-fv --problem burgers-shock --scheme le --dx 0.1 --cfl 0.2 "
        "--times 1,2 --output " + path.string());
    CHECK(result.status == 0);
    const auto solution = hyplab::read_solution_csv(path.string());
    REQUIRE(solution.times.size() == 2);
    CHECK(solution.times[0] == 1.0);
    CHECK(solution.times[1] == 2.0);
    CHECK(solution.x_centers.size() == 200);
}

TEST_CASE("solve-fv rejects unknown problems with the catalog") {
    const auto result = run_cli("solve-fv --problem nope --output /tmp/x.csv");
    CHECK(result.status != 0);
    CHECK(result.err.find("burgers-rarefaction") != std::string::npos);
}

TEST_CASE("oracle writes exact samples") {
    const auto path = work_dir() / "oracle.csv";
    const auto result = run_cli(
        "oracle --problem burgers-rarefaction --times 1,2 --dx 0.5 --output " +
        path.string());
    CHECK(result.status == 0);
    const auto solution = hyplab::read_solution_csv(path.string());
    CHECK(solution.times.size() == 2);

    // Smooth case past its horizon is an error, not a wrong answer.
    const auto bad = run_cli("oracle --problem burgers-smooth --times 2 --output " +
                             (work_dir() / "bad.csv").string());
    CHECK(bad.status != 0);
    CHECK(bad.err.find("horizon") != std::string::npos);
}

TEST_CASE("train writes a loadable checkpoint and a loss history") {
    const auto ckpt = work_dir() / "net.bin";
    const auto history = work_dir() / "loss.csv";
    const auto result = run_cli(
        "train --problem burgers-rarefaction --width 4 --n-f 200 --n-u 20 "
        "--iterations 25 --checkpoint " + ckpt.string() +
        " --loss-history " + history.string());
    CHECK(result.status == 0);
    const auto params = hyplab::load_checkpoint(ckpt.string());
    CHECK(params.layer_sizes().size() == 11);

    std::ifstream is(history);
    std::string line;
    std::getline(is, line);
    CHECK(line == "iteration,loss");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 25);
}

TEST_CASE("compare reports mean squared errors") {
    const auto sol = work_dir() / "cmp_sol.csv";
    const auto oracle = work_dir() / "cmp_oracle.csv";
    REQUIRE(run_cli("solve-fv --problem burgers-rarefaction --scheme le --dx 0.05 "
                    "--cfl 0.2 --times 2 --output " + sol.string()).status == 0);
    REQUIRE(run_cli("oracle --problem burgers-rarefaction --times 2 --dx 0.25 "
                    "--output " + oracle.string()).status == 0);

    const auto result = run_cli("compare " + sol.string() + " " + oracle.string() +
                                " --times 2");
    CHECK(result.status == 0);
    CHECK(result.out.find("t,error") != std::string::npos);
    CHECK(result.out.find("2,") != std::string::npos);
}

TEST_CASE("compare rejects mismatched grids") {
    const auto sol = work_dir() / "mm_sol.csv";      // domain [-10, 10]
    const auto other = work_dir() / "mm_oracle.csv";  // domain [-8, 8]
    REQUIRE(run_cli("solve-fv --problem burgers-shock --scheme le --dx 0.5 "
                    "--cfl 0.2 --times 1 --output " + sol.string()).status == 0);
    REQUIRE(run_cli("oracle --problem bl-shock --times 1 --dx 0.5 --output " +
                    other.string()).status == 0);

    const auto result = run_cli("compare " + sol.string() + " " + other.string());
    CHECK(result.status != 0);
    CHECK(result.err.find("mismatch") != std::string::npos);

    // A time that one input does not record is also a mismatch.
    const auto missing = run_cli("compare " + sol.string() + " " + sol.string() +
                                 " --times 0.75");
    CHECK(missing.status != 0);
    CHECK(missing.err.find("mismatch") != std::string::npos);
}

TEST_CASE("experiment runs end to end and rejects unknown names") {
    const auto out_dir = work_dir() / "exp";
    const auto result = run_cli(
        "experiment burgers-rarefaction --n-f 300 --n-u 32 --width 4 "
        "--iterations 30 --out-dir " + out_dir.string());
    CHECK(result.status == 0);
    CHECK(fs::exists(out_dir / "burgers-rarefaction-report.txt"));
    CHECK(fs::exists(out_dir / "burgers-rarefaction-errors.csv"));

    // Re-run from the report echo.
    const auto rerun = run_cli("experiment --config " +
                               (out_dir / "burgers-rarefaction-report.txt").string() +
                               " --out-dir " + (work_dir() / "exp2").string());
    CHECK(rerun.status == 0);
    const auto first = hyplab::read_error_series_csv(
        (out_dir / "burgers-rarefaction-errors.csv").string());
    const auto second = hyplab::read_error_series_csv(
        (work_dir() / "exp2" / "burgers-rarefaction-errors.csv").string());
    CHECK(first == second);

    const auto bogus = run_cli("experiment not-a-problem");
    CHECK(bogus.status != 0);
    CHECK(bogus.err.find("bl-shock") != std::string::npos);
}
