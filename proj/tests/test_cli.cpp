#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

// Drives the installed binary end to end. VISCOWAVE_BIN is injected by the
// build so the test always exercises the artifact that ships.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "viscowave_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(VISCOWAVE_BIN) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult res;
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    return res;
}

std::string artifact(const std::string& name) { return (scratch_dir() / name).string(); }

// First line of an RFC-4180 file, CRLF stripped.
std::string header_of(const std::string& path) {
    const std::string text = slurp(path);
    const auto eol = text.find("\r\n");
    REQUIRE(eol != std::string::npos);
    return text.substr(0, eol);
}

std::size_t line_count(const std::string& path) {
    const std::string text = slurp(path);
    std::size_t n = 0;
    for (std::string::size_type pos = 0; (pos = text.find("\r\n", pos)) != std::string::npos;
         pos += 2)
        ++n;
    return n;
}

bool json_check(const std::string& path, const std::string& key) {
    const std::string text = slurp(path);
    const auto pos = text.find("\"" + key + "\"");
    REQUIRE(pos != std::string::npos);
    return text.find("true", pos) < text.find("false", pos);
}

const std::string kStd07 = "'{\"kind\":\"standard\",\"beta\":0.7,\"eps\":1.0}'";
const std::string kExp = "'{\"kind\":\"exp\",\"tau0\":1.0}'";

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("spectrum1d --help").status == 0);
    CHECK(run_cli("").status != 0);          // a subcommand is required
    CHECK(run_cli("spectra").status != 0);   // unknown subcommand
    const RunResult res = run_cli("spectrum1d --out x.csv");
    CHECK(res.status != 0);                  // --kernel is required
    CHECK(res.err.find("--kernel") != std::string::npos);
}

TEST_CASE("schema errors name the offending field") {
    RunResult res = run_cli("spectrum1d --kernel '{\"kind\":\"standard\",\"beta\":0.7,"
                            "\"epsilon\":1.0}' --out " +
                            artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("unknown field 'epsilon'") != std::string::npos);

    res = run_cli("spectrum1d --kernel '{\"kind\":\"standard\",\"beta\":0.7}' --out " +
                  artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("missing field 'eps'") != std::string::npos);

    res = run_cli("spectrum1d --kernel '{\"kind\":\"sine\"}' --out " + artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("unknown kind 'sine'") != std::string::npos);

    res = run_cli("spectrum1d --kernel not-a-file.json --out " + artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("cannot read file") != std::string::npos);

    res = run_cli("spectrum1d --kernel " + kStd07 + " --n-range 20 --out " +
                  artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("--n-range") != std::string::npos);

    res = run_cli("rates --kernel " + kStd07 + " --scenario sometimes --out " +
                  artifact("bad.csv"));
    CHECK(res.status == 2);
    CHECK(res.err.find("--scenario") != std::string::npos);
}

TEST_CASE("spectrum1d emits the documented columns and a summary") {
    const std::string csv = artifact("roots.csv");
    const RunResult res =
        run_cli("spectrum1d --kernel " + kStd07 + " --n-range 20:25 --out " + csv);
    CHECK(res.status == 0);
    CHECK(header_of(csv) == "n,re_z,im_z,residual,seed_re,seed_im,ratio_r_n");
    CHECK(line_count(csv) == 7);  // header + one row per branch
    CHECK(json_check(artifact("roots.json"), "residuals_within_tol"));
}

TEST_CASE("disk emits the documented columns") {
    const std::string csv = artifact("disk.csv");
    const RunResult res =
        run_cli("disk --kernel " + kStd07 + " --l 0 --n-range 10:14 --out " + csv);
    CHECK(res.status == 0);
    CHECK(header_of(csv) == "l,n,re_z,im_z,residual,xi_ratio_re,xi_ratio_im,rate_product");
    CHECK(line_count(csv) == 6);
    CHECK(json_check(artifact("disk.json"), "residuals_within_tol"));
}

TEST_CASE("resolvent emits the documented columns") {
    const std::string csv = artifact("res.csv");
    const RunResult res = run_cli("resolvent --kernel " + kStd07 +
                                  " --s-grid log:1:100:12 --grid-n 64 --out " + csv);
    CHECK(res.status == 0);
    CHECK(header_of(csv) == "s,norm_R,proxy_full,B,refinement_ratio");
    CHECK(line_count(csv) == 13);
    CHECK(json_check(artifact("res.json"), "refinement_within_1pct"));

    const RunResult bad = run_cli("resolvent --kernel " + kStd07 +
                                  " --s-grid log:1:100:12 --grid-n tiny --out " + csv);
    CHECK(bad.status == 2);
    CHECK(bad.err.find("--grid-n") != std::string::npos);
}

TEST_CASE("simulate emits the decay trace") {
    const std::string csv = artifact("decay.csv");
    const RunResult res = run_cli("simulate --kernel " + kExp +
                                  " --grid-n 128 --quad-nodes 1 --tau-max 10 --T 30"
                                  " --init powerlaw:1.5 --out " +
                                  csv);
    CHECK(res.status == 0);
    CHECK(header_of(csv) == "t,E,E1_hom,weighted_psi");
    CHECK(line_count(csv) > 100);
    CHECK(json_check(artifact("decay.json"), "energy_monotone"));

    const RunResult bad = run_cli("simulate --kernel " + kExp + " --init vortex --T 30 --out " +
                                  artifact("bad.csv"));
    CHECK(bad.status == 2);
    CHECK(bad.err.find("profile") != std::string::npos);
}

TEST_CASE("rates picks the scenario from the kernel") {
    const std::string csv = artifact("env.csv");
    RunResult res =
        run_cli("rates --kernel " + kExp + " --t-grid log:10:1e3:20 --out " + csv);
    CHECK(res.status == 0);
    CHECK(header_of(csv) == "t,bound,bound_log_free");
    CHECK(json_check(artifact("env.json"), "envelope_nonincreasing"));
    CHECK(slurp(artifact("env.json")).find("\"scenario\": \"infinity\"") != std::string::npos);

    res = run_cli("rates --kernel '{\"kind\":\"prime\",\"alpha\":2.0,\"beta\":0.8}'"
                  " --t-grid log:10:1e3:20 --out " +
                  artifact("envp.csv"));
    CHECK(res.status == 0);
    CHECK(slurp(artifact("envp.json")).find("\"scenario\": \"zero-and-infinity\"") !=
          std::string::npos);

    // Requesting the wrong scenario by hand is a config error.
    res = run_cli("rates --kernel '{\"kind\":\"prime\",\"alpha\":2.0,\"beta\":0.8}'"
                  " --scenario infinity --t-grid log:10:1e3:20 --out " +
                  artifact("bad.csv"));
    CHECK(res.status == 2);
}

TEST_CASE("identical config and seed give byte-identical output") {
    const std::string a = artifact("cl_a.csv"), b = artifact("cl_b.csv"), c = artifact("cl_c.csv");
    const std::string base = "clusters --delta 0.3 --s-list 100,400 --trials 20 ";
    CHECK(run_cli(base + "--seed 7 --out " + a).status == 0);
    CHECK(run_cli(base + "--seed 7 --out " + b).status == 0);
    CHECK(run_cli(base + "--seed 8 --out " + c).status == 0);
    const std::string bytes_a = slurp(a);
    CHECK(bytes_a.size() > 100);
    CHECK(bytes_a == slurp(b));
    CHECK(bytes_a != slurp(c));
    CHECK(slurp(artifact("cl_a.json")) == slurp(artifact("cl_b.json")));

    // Thread count must not leak into the artifact.
    CHECK(run_cli("resolvent --kernel " + kStd07 + " --s-grid log:1:100:12 --grid-n 64 --out " +
                  artifact("res_a.csv"))
              .status == 0);
    const int rc = std::system(("VISCOWAVE_THREADS=1 " + std::string(VISCOWAVE_BIN) +
                                " resolvent --kernel " + kStd07 +
                                " --s-grid log:1:100:12 --grid-n 64 --out " +
                                artifact("res_b.csv") + " >/dev/null 2>&1")
                                   .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp(artifact("res_a.csv")) == slurp(artifact("res_b.csv")));
}

TEST_CASE("accept runs selected criteria") {
    const RunResult res = run_cli("accept --suite primary --only 10 --out " +
                                  artifact("accept.json"));
    CHECK(res.status == 0);
    CHECK(res.out.find("PASS criterion 10") != std::string::npos);
    CHECK(slurp(artifact("accept.json")).find("\"failures\": 0") != std::string::npos);

    CHECK(run_cli("accept --suite nightly").status == 2);
    CHECK(run_cli("accept --only 11").status == 2);
}
