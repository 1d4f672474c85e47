#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qie/cli.hpp"
#include "qie/report.hpp"
#include "support.hpp"

using namespace qie;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qie_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve text reports") {
  auto r = run({"solve", "--gen", "aslink:1", "--quandle", "symplectic:p=5,n=1", "--format", "text"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("phi_E = 25q^1 + 360q^2 + 360q^3 + 360q^21 + 120q^22; |Hom| = 1225") != std::string::npos);

  r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=3,n=1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("9q^1 + 72q^2 + 72q^3") != std::string::npos);

  r = run({"solve", "--gen", "unknot", "--quandle", "takasaki:n=7"});
  CHECK(r.out.find("phi_E = 7q^1; |Hom| = 7") != std::string::npos);

  r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--census"});
  CHECK(r.out.find("|Im f| = 2: 3 partitions") != std::string::npos);
  CHECK(r.out.find("  {{1,4},{2,3}} x") != std::string::npos);
}

TEST_CASE("brute and dc agree") {
  auto dc = run({"solve", "--gen", "figure8", "--quandle", "takasaki:n=5", "--format", "json"});
  auto brute = run({"solve", "--gen", "figure8", "--quandle", "takasaki:n=5", "--format", "json", "--method", "brute"});
  REQUIRE(dc.code == kExitOk);
  REQUIRE(brute.code == kExitOk);
  CHECK(parse_json_report(dc.out).polynomial == parse_json_report(brute.out).polynomial);
}

TEST_CASE("json round trip") {
  auto r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto rep = parse_json_report(r.out);
  CHECK(rep.hom_count == 1225);
  CHECK(rep.polynomial.to_text() == "25q^1 + 360q^2 + 840q^3");
  CHECK(rep.link_name == "H");
  CHECK(render(rep, ReportFormat::Json) == r.out);
}

TEST_CASE("csv census") {
  auto r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--format", "csv", "--census"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("image_size,partition,multiplicity\n", 0) == 0);
  CHECK(r.out.find("1,\"{{1,2,3,4}}\",25\n") != std::string::npos);
  r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--format", "csv"});
  CHECK(r.out == "image_size,coefficient\n1,25\n2,360\n3,840\n");
}

TEST_CASE("thread count does not change output") {
  const std::vector<std::string> base = {"solve", "--gen", "aslink:1", "--quandle", "symplectic:p=3,n=1", "--census"};
  auto ref = run(base);
  for (auto t : {"1", "2", "3"}) {
    auto args = base;
    args.insert(args.end(), {"--threads", t});
    CHECK(run(args).out == ref.out);
  }
}

TEST_CASE("compare") {
  auto r = run({"compare", "--link-a", "gen:hopfsum", "--link-b", "gen:aslink:1", "--quandle", "symplectic:p=5,n=1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("distinguished_by_count=false") != std::string::npos);
  CHECK(r.out.find("distinguished=true") != std::string::npos);

  r = run({"compare", "--link-a", "gen:aslink:1", "--link-b", "gen:aslink:2", "--quandle", "symplectic:p=2,n=1"});
  CHECK(r.code == kExitNotDistinguished);
  CHECK(r.out.find("distinguished=false") != std::string::npos);

  r = run({"compare", "--link-a", "trefoil", "--link-b", "trefoil", "--quandle", "takasaki:n=3"});
  CHECK(r.code == kExitNotDistinguished);
}

TEST_CASE("generate and check") {
  const auto path = scratch("l2.json");
  auto r = run({"generate", "--gen", "aslink:2", "--out", path.string()});
  REQUIRE(r.code == kExitOk);
  const auto d = read_link_file(path);
  CHECK(d.crossings.size() == 85);
  CHECK(d == generate("aslink:2"));

  r = run({"check", "--link", path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("strict validation: clean") != std::string::npos);

  r = run({"generate", "--gen", "hopfsum"});
  CHECK(r.code == kExitOk);
  CHECK(parse_link(r.out).crossings.size() == 4);

  r = run({"generate", "--gen", "aslink:0"});
  CHECK(same_up_to_relabeling(parse_link(r.out), generate("hopfsum")));

  r = run({"check", "--quandle", "symplectic:p=5,n=1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("nonzero subquandle: connected") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"solve", "--quandle", "takasaki:n=3"}).code == kExitUsage);
  CHECK(run({"solve", "--gen", "trefoil", "--link", "x.json", "--quandle", "takasaki:n=3"}).code == kExitUsage);
  CHECK(run({"solve", "--gen", "trefoil", "--quandle", "takasaki:n=3", "--chunk-size", "9"}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"check", "--quandle", "symplectic:p=4,n=1"}).code == kExitInput);
  CHECK(run({"solve", "--gen", "nosuch", "--quandle", "takasaki:n=3"}).code == kExitInput);
  CHECK(run({"solve", "--link", scratch("missing.json").string(), "--quandle", "takasaki:n=3"}).code == kExitInput);

  const auto bad = scratch("bad.txt");
  std::ofstream(bad) << "# arcs: 3\nc1: x1 = x2 * \n";
  auto r = run({"solve", "--link", bad.string(), "--quandle", "takasaki:n=3"});
  CHECK(r.code == kExitInput);
  CHECK_FALSE(r.err.empty());

  CHECK(run({"solve", "--gen", "aslink:1", "--quandle", "symplectic:p=5,n=1", "--method", "brute"}).code == kExitGuard);
  CHECK(run({"solve", "--gen", "aslink:1", "--quandle", "symplectic:p=5,n=1", "--row-cap", "1"}).code == kExitGuard);
}

TEST_CASE("lenient flag accepts the raw reference tables") {
  const auto path = test::data_path("aslink1_table.txt");
  CHECK(run({"solve", "--link", path, "--quandle", "symplectic:p=2,n=1"}).code == kExitInput);
  auto r = run({"solve", "--link", path, "--quandle", "symplectic:p=2,n=1", "--lenient"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("row cap from the environment") {
  ::setenv("QIE_ROW_CAP", "1", 1);
  auto r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--chunk-size", "1"});
  CHECK(r.code == kExitGuard);
  r = run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1", "--row-cap", "100000"});
  CHECK(r.code == kExitOk);
  ::setenv("QIE_ROW_CAP", "junk", 1);
  CHECK(run({"solve", "--gen", "hopfsum", "--quandle", "symplectic:p=5,n=1"}).code == kExitUsage);
  ::unsetenv("QIE_ROW_CAP");
}

}  // TEST_SUITE
