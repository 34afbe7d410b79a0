#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kvwave/config.hpp"
#include "kvwave/error.hpp"

using namespace kvwave;
namespace fs = std::filesystem;

namespace {

ErrorCode parse_code(const std::string& text, const Overrides& o = {}) {
  try {
    parse_config(text, o);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("kvwave_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::string meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  Csv csv;
  std::ifstream in(p);
  std::string line;
  std::getline(in, csv.meta);
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line)) csv.rows.push_back(split(line));
  return csv;
}

}  // namespace

TEST_CASE("key=value config") {
  RunConfig r = parse_config("command=simulate\nc=4\nd=1\nN=200\nT=50\ndt=0.005");
  CHECK(r.command == Command::simulate);
  CHECK(r.N == 200);
  CHECK(r.T == 50.0);
  CHECK(r.dt == 0.005);
  CHECK(r.output == "simulate.csv");
}

TEST_CASE("defaults") {
  RunConfig r = parse_config("command = scan  # comment\n\n");
  CHECK(r.params.c == 4.0);
  CHECK(r.params.d == 1.0);
  CHECK(r.N == 512);
  CHECK(r.seed == 0);
  CHECK(parse_config("command=quasimode").n_list == std::vector<int>{2, 4, 8, 16});
}

TEST_CASE("JSON config") {
  RunConfig r = parse_config(R"({"command": "quasimode", "c": 4, "n_list": [2, 4, 8], "strict_theta": true})");
  CHECK(r.command == Command::quasimode);
  CHECK(r.n_list == std::vector<int>{2, 4, 8});
  CHECK(r.strict_theta);
  CHECK(parse_code(R"({"command": "scan", "c": 4, "c": 5})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"command": "scan",)") == ErrorCode::ParseError);
}

TEST_CASE("config errors") {
  CHECK(parse_code("command=scan\nc=4\nc=5") == ErrorCode::ParseError);
  CHECK(parse_code("command=scan\nnot a pair") == ErrorCode::ParseError);
  CHECK(parse_code("command=scan\nspeed=4") == ErrorCode::ValidationError);
  CHECK(parse_code("c=4") == ErrorCode::ValidationError);
  CHECK(parse_code("command=scan\nN=7") == ErrorCode::ValidationError);
  CHECK(parse_code("command=scan\nc=abc") == ErrorCode::ValidationError);
  CHECK(parse_code("command=simulate\nT=-1") == ErrorCode::ValidationError);
  CHECK(parse_code("command=scan\nc=0.5", {{"insert_quasimodes", "true"}}) == ErrorCode::ValidationError);
  CHECK_NOTHROW(parse_config("command=scan\nc=0.5"));
  try {
    parse_config("command=scan\nc=0.5\ninsert_quasimodes=true");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("c:") != std::string::npos);
  }
}

TEST_CASE("overrides replace file values") {
  RunConfig r = parse_config("command=simulate\nN=200", {{"N", "64"}, {"seed", "9"}});
  CHECK(r.N == 64);
  CHECK(r.seed == 9);
}

TEST_CASE("simulate writes a deterministic, parseable trace") {
  fs::path dir = scratch_dir();
  auto cfg = [&](const std::string& out) {
    return parse_config("command=simulate\nN=64\nT=2\ninit=random\nsmooth=true\nseed=3\noutput=" + (dir / out).string());
  };
  std::ostringstream log;
  int status = run(cfg("a.csv"), log);
  INFO(log.str());
  REQUIRE(status == 0);
  REQUIRE(run(cfg("b.csv"), log) == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  Csv csv = read_csv(dir / "a.csv");
  CHECK(csv.meta.rfind("# kvwavelab", 0) == 0);
  CHECK(csv.meta.find("N=64") != std::string::npos);
  CHECK(csv.header == std::vector<std::string>{"t", "E", "D"});
  REQUIRE(csv.rows.size() > 10);
  double prev = 1e300;
  for (const auto& row : csv.rows) {
    double e = std::stod(row[1]);
    CHECK(e <= prev * (1.0 + 1e-12));
    prev = e;
    // 17 significant digits survive a round trip
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", e);
    CHECK(row[1] == buf);
  }
  fs::remove_all(dir);
}

TEST_CASE("quasimode table") {
  fs::path dir = scratch_dir();
  RunConfig r = parse_config("command=quasimode\nn_list=2,4,8\noutput=" + (dir / "q.csv").string());
  std::ostringstream log;
  REQUIRE(run(r, log) == 0);
  Csv csv = read_csv(dir / "q.csv");
  CHECK(csv.header == std::vector<std::string>{"n", "quantity", "exact", "model", "residual", "order"});
  std::vector<double> norms;
  for (const auto& row : csv.rows)
    if (row[csv.col("quantity")] == "vx_norm") norms.push_back(std::stod(row[csv.col("model")]));
  REQUIRE(norms.size() == 3);
  CHECK(norms[0] < norms[1]);
  CHECK(norms[1] < norms[2]);
  fs::remove_all(dir);
}

TEST_CASE("scan reports the weighted supremum") {
  fs::path dir = scratch_dir();
  RunConfig r = parse_config("command=scan\nN=64\nbeta_max=30\nbeta_points=1\ngamma=12\noutput=" +
                             (dir / "s.csv").string());
  std::ostringstream log;
  REQUIRE(run(r, log) == 0);
  std::string text = log.str();
  auto pos = text.find("sup beta^-12 * norm = ");
  REQUIRE(pos != std::string::npos);
  CHECK(text.find(" at beta=", pos) != std::string::npos);
  Csv csv = read_csv(dir / "s.csv");
  CHECK(csv.header == std::vector<std::string>{"beta", "norm", "iterations", "converged"});
  CHECK(csv.rows.size() == 30);
  fs::remove_all(dir);
}

TEST_CASE("audit, spectrum and stationary commands") {
  fs::path dir = scratch_dir();
  std::ostringstream log;
  CHECK(run(parse_config("command=audit\nquantities=omega_n,mu_minus\noutput=" + (dir / "a.csv").string()), log) == 0);
  CHECK(read_csv(dir / "a.csv").rows.size() == 12);
  CHECK(run(parse_config("command=spectrum\nN=32\nshift_im=5\nprobes=2\nshift_step=5\noutput=" + (dir / "e.csv").string()),
            log) == 0);
  CHECK(read_csv(dir / "e.csv").rows.size() == 2);
  CHECK(run(parse_config("command=stationary\nN=32\nprobes=3\noutput=" + (dir / "st.csv").string()), log) == 0);
  CHECK(read_csv(dir / "st.csv").header.back() == "ratio");
  fs::remove_all(dir);
}

TEST_CASE("module errors give a nonzero status and one diagnostic line") {
  std::ostringstream log;
  RunConfig r = parse_config("command=simulate\nN=6\nsupport_lo=0.5\noutput=/nonexistent/x.csv");
  CHECK(run(r, log) != 0);
  std::string text = log.str();
  CHECK(text.rfind("error: ", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

#ifdef KVWAVELAB_EXE
TEST_CASE("executable") {
  fs::path dir = scratch_dir();
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "command=stationary\nN=16\noutput=" << (dir / "out.csv").string() << "\n";
  std::string exe = KVWAVELAB_EXE;
  auto status = [](const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); };
  CHECK(status(exe + " stationary --config " + cfg.string()) == 0);
  CHECK(fs::exists(dir / "out.csv"));
  CHECK(status(exe + " stationary --config " + cfg.string() + " --set probes=2 --set N=32") == 0);
  CHECK(status(exe + " scan --config " + cfg.string()) != 0);
  CHECK(status(exe + " stationary --config " + cfg.string() + " --set bogus=1") != 0);
  CHECK(status(exe + " stationary --set N=7") != 0);
  fs::remove_all(dir);
}
#endif
