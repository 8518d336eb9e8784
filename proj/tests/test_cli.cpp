#include <doctest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "canon/file_formats.hpp"
#include "canon/grid_hamiltonian.hpp"
#include "canon/spectral_measure.hpp"
#include "canon/weights_a2.hpp"

namespace fs = std::filesystem;
using namespace canon;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("canon_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args) {
  const fs::path err = fs::temp_directory_path() / ("canon_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = std::string(CANON_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = load_text(err.string());
  fs::remove(err);
  return r;
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("factorize with the unit weight reports the identity") {
  const auto dir = scratch("unit");
  const auto r = run("factorize --weight \"constant c=1\" --R 4 --N 6 --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "residual") == "0");
  CHECK(value_of(r.out, "leakage") == "0");
  std::ifstream in(dir / "A.matrix");
  CHECK(read_matrix(in) == Eigen::MatrixXd::Identity(6, 6));
  std::ifstream rep(dir / "report.txt");
  CHECK(read_report(rep).at("residual") == "0");
}

TEST_CASE("szego with a constant weight prints zeros") {
  const auto dir = scratch("szego");
  const auto r = run("szego --weight \"constant c=3\" --out " + dir.string());
  REQUIRE(r.code == 0);
  std::istringstream table(load_text((dir / "szego.txt").string()));
  std::string header;
  std::getline(table, header);
  CHECK(header.rfind("#szego v1", 0) == 0);
  int rows = 0;
  for (double y, K; table >> y >> K; ++rows) CHECK(K == 0.0);
  CHECK(rows == 5);
}

TEST_CASE("invert then forward recovers the weight") {
  const auto dir = scratch("roundtrip");
  const std::string spec = "sinc2-bump amplitude=0.5 bandwidth=1";
  REQUIRE(run("invert --weight \"" + spec + "\" --R 20 --N 512 --out " + dir.string()).code == 0);
  const auto r = run("forward --hamiltonian " + (dir / "hamiltonian.ham").string() + " --x-count 21 --out " +
                     dir.string());
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "density.weight");
  const Weight got = read_weight(in);
  const Weight want = parse_weight_spec(spec);
  REQUIRE(got.sample_x().size() == 21);
  for (std::size_t i = 0; i < got.sample_x().size(); ++i) {
    const double x = got.sample_x()[i];
    CHECK(std::abs(got.sample_w()[i] - want(x)) <= 1e-3 * want(x));
  }
}

TEST_CASE("outputs are byte-identical across runs and round-trip through the readers") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run("invert --weight \"step level=2 half_width=1\" --R 10 --N 64 --out " + dir.string()).code == 0);
    REQUIRE(run("factorize --weight \"cosine-bump amplitude=1 half_width=2\" --R 10 --N 32 --out " + dir.string())
                .code == 0);
  }
  for (const char* name : {"hamiltonian.ham", "A.matrix", "L.matrix", "report.txt"}) {
    CHECK(load_text((a / name).string()) == load_text((b / name).string()));
  }
  const std::string ham = load_text((a / "hamiltonian.ham").string());
  std::istringstream in(ham);
  std::ostringstream again;
  write_hamiltonian(again, read_hamiltonian(in));
  CHECK(again.str() == ham);
  const std::string mat = load_text((a / "A.matrix").string());
  std::istringstream min(mat);
  std::ostringstream mout;
  write_matrix(mout, read_matrix(min));
  CHECK(mout.str() == mat);
}

TEST_CASE("decompose writes exact parts") {
  const auto dir = scratch("decompose");
  const HalfLineFunction f(Grid(std::vector<double>{0.0, 0.5, 1.0, 4.0}), {3.0, -0.25, 0.5});
  std::ostringstream os;
  write_halfline(os, f);
  save_text((dir / "f.halfline").string(), os.str());
  const auto r = run("decompose --function " + (dir / "f.halfline").string() + " --out " + dir.string());
  REQUIRE(r.code == 0);
  std::ifstream i1(dir / "f1.halfline"), i2(dir / "f2.halfline");
  const auto f1 = read_halfline(i1), f2 = read_halfline(i2);
  for (std::size_t i = 0; i < f.cell_count(); ++i) CHECK(f1.values[i] + f2.values[i] == f.values[i]);
  CHECK(std::stod(value_of(r.out, "ratio")) <= 4.0);
}

TEST_CASE("a2 of a constant") {
  const auto dir = scratch("a2");
  save_text((dir / "c.halfline").string(), "#halfline v1\n#tail=2\n0 1 2\n1 3 2\n");
  const auto r = run("a2 --function " + (dir / "c.halfline").string());
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "a2") == "1");
  CHECK(value_of(r.out, "a2_ell1") == "0");
}

TEST_CASE("transform reports the isometry residual") {
  const auto dir = scratch("transform");
  REQUIRE(run("invert --weight \"constant c=1\" --R 2 --N 4 --out " + dir.string()).code == 0);
  save_text((dir / "f.halfline").string(), "#halfline v1\n0 1 1\n");
  const auto r = run("transform --hamiltonian " + (dir / "hamiltonian.ham").string() + " --function " +
                     (dir / "f.halfline").string() + " --weight \"constant c=1\" --r 1 --X 1000 --out " +
                     dir.string());
  REQUIRE(r.code == 0);
  CHECK(std::stod(value_of(r.out, "residual")) <= 1e-3);
  CHECK(fs::exists(dir / "transform.txt"));
}

TEST_CASE("config file values apply and flags override them") {
  const auto dir = scratch("config");
  save_text((dir / "job.ini").string(),
            "out = \"" + dir.string() + "\"\n[factorize]\nweight = \"constant c=4\"\nR = 2\nN = 3\n");
  auto r = run("--config " + (dir / "job.ini").string() + " factorize");
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "A.matrix");
  CHECK(read_matrix(in).rows() == 3);
  r = run("--config " + (dir / "job.ini").string() + " factorize --N 5");
  REQUIRE(r.code == 0);
  std::ifstream in5(dir / "A.matrix");
  CHECK(read_matrix(in5).rows() == 5);
}

TEST_CASE("exit codes and one-line reasons") {
  auto one_line = [](const Run& r) {
    return r.err.rfind("error kind=", 0) == 0 && r.err.find('\n') == r.err.size() - 1;
  };
  Run r = run("factorize --weight \"constant c=1\" --N 1");
  CHECK(r.code == 2);
  CHECK(one_line(r));
  r = run("factorize --bogus-flag");
  CHECK(r.code == 2);
  CHECK(one_line(r));
  r = run("invert --weight \"wiggle a=1\"");
  CHECK(r.code == 2);
  r = run("invert --weight \"step level=0 half_width=1\" --out " + scratch("dom").string());
  CHECK(r.code == 3);
  CHECK(r.err.find("kind=domain") != std::string::npos);
  CHECK(one_line(r));
  const auto dir = scratch("conv");
  save_text((dir / "h.ham").string(), "#canon-hamiltonian v1\n0 1 1 0 1\n");
  r = run("weyl --hamiltonian " + (dir / "h.ham").string() + " --z 0,0.1 --extend-tail 0 --out " + dir.string());
  CHECK(r.code == 4);
  CHECK(r.err.find("kind=convergence") != std::string::npos);
  CHECK(one_line(r));
}

TEST_CASE("worker count does not change results") {
  const auto a = scratch("threads_1"), b = scratch("threads_3");
  const std::string job = "forward --hamiltonian ";
  REQUIRE(run("invert --weight \"cosine-bump amplitude=1 half_width=2\" --R 10 --N 64 --out " + a.string()).code == 0);
  const std::string ham = (a / "hamiltonian.ham").string();
  REQUIRE(std::system(("CANON_FACTOR_THREADS=1 " + std::string(CANON_CLI_PATH) + " " + job + ham + " --out " +
                       a.string() + " >/dev/null")
                          .c_str()) == 0);
  REQUIRE(std::system(("CANON_FACTOR_THREADS=3 " + std::string(CANON_CLI_PATH) + " " + job + ham + " --out " +
                       b.string() + " >/dev/null")
                          .c_str()) == 0);
  CHECK(load_text((a / "density.weight").string()) == load_text((b / "density.weight").string()));
}

TEST_CASE("verify prints one line per criterion") {
  const auto dir = scratch("verify");
  const auto r = run("verify --seed 0 --out " + dir.string());
  std::istringstream in(r.out);
  int lines = 0, passed = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("PASS [", 0) == 0 || line.rfind("FAIL [", 0) == 0) ++lines;
    if (line.rfind("PASS [", 0) == 0) ++passed;
  }
  CHECK(lines == 11);
  CHECK(r.code == (passed == 11 ? 0 : 1));
  CHECK(fs::exists(dir / "acceptance.txt"));
}
