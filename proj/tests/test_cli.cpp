#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bdtree/cli.hpp"
#include "bdtree/io.hpp"
#include "bdtree/spectral.hpp"
#include "fixtures.hpp"

using namespace bdtree;

namespace {

const std::string kData = BDTREE_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bdtree");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bdtree_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("exact reports the closed forms") {
  const auto star = cli({"exact", kData + "/star.tree"});
  CHECK(star.code == 0);
  CHECK(has_line(star.out, "exact.lambda0: 0.267949192431"));
  CHECK(has_line(star.out, "exact.monotone: true"));
  CHECK(has_line(star.out, "status: ok"));

  const auto path = cli({"exact", kData + "/path3.tree"});
  CHECK(has_line(path.out, "exact.lambda0: 0.381966011250"));

  const auto fn = temp_path("eigenfunction.fn");
  CHECK(cli({"exact", kData + "/star.tree", "--eigenfunction", fn}).code == 0);
  const auto g = read_vertex_function_file(fn, 4);
  CHECK(g[1] == 1.0);
  std::filesystem::remove(fn);
}

TEST_CASE("bounds reports closed forms and certificates") {
  const auto star = cli({"bounds", kData + "/star.tree"});
  CHECK(star.code == 0);
  CHECK(has_line(star.out, "closed_form.lower: 0.166666666667"));
  CHECK(has_line(star.out, "closed_form.upper: 0.333333333333"));
  CHECK(has_line(star.out, "certificate.0.family: F_I"));
  CHECK(has_line(star.out, "certificate.0.value: 0.261203874964"));
  CHECK(has_line(star.out, "certificates: 6"));

  const auto path = cli({"bounds", kData + "/path3.tree", "--families", "F_I,W"});
  CHECK(has_line(path.out, "closed_form.lower: 0.250000000000"));
  CHECK(has_line(path.out, "closed_form.upper: 0.500000000000"));
  CHECK(has_line(path.out, "certificates: 2"));

  // Fifty steps of the iteration bring the F_II lower bound within 1e-6.
  const auto it = cli({"--json", "bounds", kData + "/star.tree", "--iterate", "50", "--families",
                       "F_II"});
  const auto pos = it.out.find("\"value\": ");
  REQUIRE(pos != std::string::npos);
  const double v = std::stod(it.out.substr(pos + 9));
  CHECK(fixtures::rel(v, fixtures::kStarLambda) <= 1e-6);

  CHECK(cli({"bounds", kData + "/star.tree", "--families", "F_X"}).code == 1);
  CHECK(cli({"bounds", kData + "/star.tree", "--iterate", "0"}).code == 1);
}

TEST_CASE("approx prints the collapse sequence") {
  const auto star = cli({"approx", kData + "/star.tree", "--layers", "1,2"});
  CHECK(star.code == 0);
  CHECK(has_line(star.out, "approx.0: 1 0.333333333333"));
  CHECK(has_line(star.out, "approx.1: 2 0.267949192431"));
  const auto path = cli({"approx", kData + "/path3.tree", "--layers", "1,2"});
  CHECK(has_line(path.out, "approx.0: 1 0.500000000000"));
  CHECK(has_line(path.out, "approx.1: 2 0.381966011250"));

  const auto deep = cli({"approx", kData + "/star.tree", "--layers", "5"});
  CHECK(deep.code == 1);
  CHECK(deep.err.find("LayerOutOfRange") != std::string::npos);
}

TEST_CASE("certify verdicts and exit codes") {
  const auto ok = cli({"certify", kData + "/star.tree", "--witness", kData + "/star_sqrt_phi.fn",
                       "--family", "F_I", "--check-exact"});
  CHECK(ok.code == 0);
  CHECK(has_line(ok.out, "domain.admissible: true"));
  CHECK(has_line(ok.out, "certificate.0.value: 0.261203874964"));

  const auto bad = cli({"certify", kData + "/star.tree", "--witness", kData + "/star_bad.fn",
                        "--family", "F_I"});
  CHECK(bad.code == 2);
  CHECK(has_line(bad.out, "domain.admissible: false"));
  CHECK(has_line(bad.out, "domain.vertex: 2"));
  CHECK(has_line(bad.out, "status: failed"));

  // Eigen-ratio witness for W gives the exact value.
  const auto star = read_tree_file(kData + "/star.tree");
  const auto w = eigen_ratio(star, solve_dirichlet(star, compute_measure(star)));
  const auto wf = temp_path("ratio.fn");
  {
    std::ofstream out(wf);
    out << serialize_vertex_function(w);
  }
  const auto ratio = cli({"--json", "certify", kData + "/star.tree", "--witness", wf, "--family", "W",
                          "--check-exact"});
  CHECK(ratio.code == 0);
  const auto pos = ratio.out.find("\"value\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(fixtures::rel(std::stod(ratio.out.substr(pos + 9)), fixtures::kStarLambda) <= 1e-8);
  std::filesystem::remove(wf);

  // A flat witness claimed as an upper bound at too small a cutoff.
  CHECK(cli({"certify", kData + "/star.tree", "--witness", kData + "/star_bad.fn", "--family",
             "F_I_mod", "--cutoff", "1"})
            .code == 2);
  CHECK(cli({"certify", kData + "/star.tree", "--witness", kData + "/star_bad.fn", "--family",
             "nope"})
            .code == 1);
}

TEST_CASE("random output is deterministic and round-trips") {
  const std::vector<std::string> args = {"random", "--seed", "7", "--size", "50", "--rate-min",
                                         "0.1", "--rate-max", "10"};
  const auto a = cli(args);
  const auto b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(serialize_tree(parse_tree_string(a.out)) == a.out);

  const auto tf = temp_path("seed7.tree");
  {
    std::ofstream out(tf);
    out << a.out;
  }
  CHECK(cli({"exact", tf}).code == 0);
  std::filesystem::remove(tf);

  const auto two = cli({"random", "--seed", "1", "--size", "2", "--rate-min", "0.1", "--rate-max", "10"});
  CHECK(parse_tree_string(two.out).size() == 2);

  CHECK(cli({"random", "--seed", "1", "--size", "1", "--rate-min", "0.1", "--rate-max", "10"}).code == 1);
  CHECK(cli({"random", "--seed", "1", "--size", "5", "--rate-min", "3", "--rate-max", "1"}).code == 1);
}

TEST_CASE("solver failure exits with 3 and reports partial status") {
  const auto r = cli({"exact", kData + "/ill_conditioned.tree"});
  CHECK(r.code == 3);
  CHECK(has_line(r.out, "status: partial"));
  CHECK(r.out.find("ConvergenceFailure") != std::string::npos);
}

TEST_CASE("input errors exit with 1") {
  const auto bad = cli({"exact", kData + "/malformed.tree"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(cli({"exact", kData + "/missing.tree"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
}

TEST_CASE("json mirrors the text fields") {
  const auto text = cli({"exact", kData + "/two_vertex.tree"});
  const auto json = cli({"--json", "exact", kData + "/two_vertex.tree"});
  CHECK(has_line(text.out, "exact.lambda0: 3.00000000000"));
  CHECK(json.out.find("\"lambda0\": 3.0") != std::string::npos);
  CHECK(json.out.find("\"status\": \"ok\"") != std::string::npos);
}
