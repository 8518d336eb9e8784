// Batch front end over the canonfactor C API.
#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "canon/canon.h"

namespace {

constexpr int kExitParse = 2;

// Carries a C API status out of a subcommand.
struct Failure {
  canon_status status;
  std::string reason;
};

void check(canon_status s) {
  if (s != CANON_OK) throw Failure{s, canon_last_error()};
}

[[noreturn]] void config_error(const std::string& reason) { throw Failure{CANON_ERR_PARSE, reason}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using HamiltonianPtr = std::unique_ptr<canon_hamiltonian, Deleter<canon_hamiltonian, canon_hamiltonian_free>>;
using WeightPtr = std::unique_ptr<canon_weight, Deleter<canon_weight, canon_weight_free>>;
using HalflinePtr = std::unique_ptr<canon_halfline, Deleter<canon_halfline, canon_halfline_free>>;
using FactorPtr = std::unique_ptr<canon_factorization, Deleter<canon_factorization, canon_factorization_free>>;

std::string num(double x) {
  char buf[64];
  canon_format_double(x, buf, sizeof buf);
  return buf;
}

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) config_error("bad number for " + what + ": '" + s + "'");
  return v;
}

// "re,im" or "re".
std::pair<double, double> parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_number(s, "z"), 0.0};
  return {parse_number(s.substr(0, comma), "z"), parse_number(s.substr(comma + 1), "z")};
}

std::vector<std::pair<double, double>> parse_points(const std::vector<std::string>& items) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : items) out.push_back(parse_complex(s));
  return out;
}

struct Job {
  std::string out_dir = ".";
  std::string report_format = "kv";
  std::uint64_t seed = 0;

  std::string hamiltonian;
  std::string function;
  std::string weight;
  std::string weight_file;
  double truncate = 0.0;

  double R = 20.0;
  std::size_t N = 256;
  double r = 0.0;

  double tol_weyl = 1e-10;
  double eps_density = 1e-3;
  double X = 0.0;
  bool extend_tail = true;

  std::vector<std::string> z;
  std::vector<double> y{0.25, 0.5, 1.0, 2.0, 4.0};
  double x_min = -5.0, x_max = 5.0;
  std::size_t x_count = 101;

  int budget = 2;
  double window_length = 2.0, window_offset = 0.0;
};

using Report = std::vector<std::pair<std::string, std::string>>;

void emit_report(const Job& job, const Report& report) {
  if (job.report_format == "tsv") {
    std::string head, row;
    for (std::size_t i = 0; i < report.size(); ++i) {
      head += (i ? "\t" : "") + report[i].first;
      row += (i ? "\t" : "") + report[i].second;
    }
    std::cout << head << '\n' << row << '\n';
  } else {
    for (const auto& [k, v] : report) std::cout << k << '=' << v << '\n';
  }
}

std::string out_path(const Job& job, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(job.out_dir, ec);
  if (ec) throw Failure{CANON_ERR_DOMAIN, "cannot create output directory '" + job.out_dir + "'"};
  return (std::filesystem::path(job.out_dir) / name).string();
}

void write_table(const std::string& path, const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << num(row[i]);
    os << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  f << os.str();
  if (!f) throw Failure{CANON_ERR_DOMAIN, "cannot write '" + path + "'"};
}

HamiltonianPtr load_hamiltonian(const Job& job) {
  if (job.hamiltonian.empty()) config_error("missing hamiltonian");
  canon_hamiltonian* h = nullptr;
  check(canon_hamiltonian_load(job.hamiltonian.c_str(), &h));
  return HamiltonianPtr(h);
}

HalflinePtr load_function(const Job& job) {
  if (job.function.empty()) config_error("missing function");
  canon_halfline* f = nullptr;
  check(canon_halfline_load(job.function.c_str(), &f));
  return HalflinePtr(f);
}

WeightPtr load_weight(const Job& job, bool required = true) {
  if (!job.weight.empty() && !job.weight_file.empty()) config_error("give either weight or weight-file, not both");
  canon_weight* w = nullptr;
  if (!job.weight.empty()) {
    check(canon_weight_from_spec(job.weight.c_str(), &w));
  } else if (!job.weight_file.empty()) {
    check(canon_weight_load(job.weight_file.c_str(), &w));
  } else {
    if (required) config_error("missing weight");
    return WeightPtr();
  }
  WeightPtr owned(w);
  if (job.truncate > 0.0) {
    canon_weight* t = nullptr;
    check(canon_weight_truncate(owned.get(), job.truncate, &t));
    owned.reset(t);
  }
  return owned;
}

void require_grid(const Job& job) {
  if (!(job.R > 0.0)) config_error("R must be > 0");
  if (job.N < 2) config_error("N must be >= 2");
}

void require_tolerances(const Job& job) {
  if (!(job.tol_weyl > 0.0)) config_error("tol-weyl must be > 0");
  if (!(job.eps_density > 0.0)) config_error("eps-density must be > 0");
  if (job.X < 0.0) config_error("X must be > 0");
}

std::pair<double, double> hamiltonian_span(const canon_hamiltonian* H) {
  const std::size_t n = canon_hamiltonian_cell_count(H);
  double first[5], last[5];
  check(canon_hamiltonian_cell(H, 0, first));
  check(canon_hamiltonian_cell(H, n - 1, last));
  return {first[0], last[1]};
}

int run_forward(const Job& job) {
  require_tolerances(job);
  if (job.x_count < 2 || !(job.x_max > job.x_min)) config_error("density grid needs x-count >= 2 and x-max > x-min");
  auto H = load_hamiltonian(job);
  const double t_end = hamiltonian_span(H.get()).second;
  auto zs = parse_points(job.z.empty() ? std::vector<std::string>{"0,1"} : job.z);

  std::vector<std::vector<double>> rows;
  for (const auto& [re, im] : zs) {
    double M[8];
    check(canon_transfer_matrix(H.get(), t_end, re, im, M));
    rows.push_back({re, im, M[0], M[1], M[2], M[3], M[4], M[5], M[6], M[7]});
  }
  const std::string transfer = out_path(job, "transfer.txt");
  write_table(transfer, "#transfer v1 t=" + num(t_end) + " z_re z_im m11 m12 m21 m22 (re im pairs)", rows);

  const std::string density = out_path(job, "density.weight");
  check(canon_weight_sample_to_file(H.get(), job.x_min, job.x_max, job.x_count, job.eps_density,
                                    job.extend_tail ? 1 : 0, density.c_str()));
  emit_report(job, {{"cells", std::to_string(canon_hamiltonian_cell_count(H.get()))},
                    {"t_end", num(t_end)},
                    {"transfer_file", "transfer.txt"},
                    {"density_file", "density.weight"}});
  return 0;
}

int run_weyl(const Job& job) {
  require_tolerances(job);
  auto H = load_hamiltonian(job);
  auto zs = parse_points(job.z.empty() ? std::vector<std::string>{"0,1", "1,1", "-1,1", "0,0.5", "2,2"} : job.z);
  std::vector<std::vector<double>> rows;
  for (const auto& [re, im] : zs) {
    double m[2];
    check(canon_weyl_function(H.get(), re, im, job.tol_weyl, job.extend_tail ? 1 : 0, m));
    rows.push_back({re, im, m[0], m[1]});
  }
  const std::string path = out_path(job, "weyl.txt");
  write_table(path, "#weyl v1 z_re z_im m_re m_im", rows);
  emit_report(job, {{"points", std::to_string(rows.size())}, {"weyl_file", "weyl.txt"}});
  return 0;
}

int run_szego(const Job& job) {
  auto w = load_weight(job);
  std::vector<std::vector<double>> rows;
  double k_min = 0.0, k_max = 0.0;
  for (std::size_t i = 0; i < job.y.size(); ++i) {
    if (!(job.y[i] > 0.0)) config_error("y values must be > 0");
    double K = 0.0;
    check(canon_szego_K(w.get(), 0.0, job.y[i], &K));
    rows.push_back({job.y[i], K});
    k_min = i ? std::min(k_min, K) : K;
    k_max = i ? std::max(k_max, K) : K;
  }
  const std::string path = out_path(job, "szego.txt");
  write_table(path, "#szego v1 y K", rows);
  emit_report(job, {{"points", std::to_string(rows.size())},
                    {"k_min", num(k_min)},
                    {"k_max", num(k_max)},
                    {"szego_file", "szego.txt"}});
  return 0;
}

int run_a2(const Job& job) {
  if (job.budget < 1) config_error("budget must be >= 1");
  if (!(job.window_length > 0.0)) config_error("window-length must be > 0");
  auto f = load_function(job);
  double a2 = 0.0, ell1 = 0.0;
  check(canon_a2_classical(f.get(), job.budget, &a2));
  check(canon_a2_ell1(f.get(), job.window_length, job.window_offset, &ell1));
  emit_report(job, {{"a2", num(a2)}, {"a2_ell1", num(ell1)}});
  return 0;
}

int run_decompose(const Job& job) {
  auto f = load_function(job);
  canon_halfline* f1 = nullptr;
  canon_halfline* f2 = nullptr;
  double norms[3];
  check(canon_decompose_l1_l2(f.get(), &f1, &f2, norms));
  HalflinePtr p1(f1), p2(f2);
  const std::string path1 = out_path(job, "f1.halfline");
  const std::string path2 = out_path(job, "f2.halfline");
  check(canon_halfline_save(p1.get(), path1.c_str()));
  check(canon_halfline_save(p2.get(), path2.c_str()));
  const double ratio = norms[2] > 0.0 ? (norms[0] + norms[1]) / norms[2] : 0.0;
  emit_report(job, {{"l1_norm", num(norms[0])},
                    {"l2_norm", num(norms[1])},
                    {"operational_norm", num(norms[2])},
                    {"ratio", num(ratio)},
                    {"f1_file", "f1.halfline"},
                    {"f2_file", "f2.halfline"}});
  return 0;
}

int run_invert(const Job& job) {
  require_grid(job);
  auto w = load_weight(job);
  canon_hamiltonian* h = nullptr;
  double cond = 0.0;
  check(canon_inverse_spectral(w.get(), job.R, job.N, &h, &cond));
  HamiltonianPtr H(h);
  const std::string path = out_path(job, "hamiltonian.ham");
  check(canon_hamiltonian_save(H.get(), path.c_str()));
  emit_report(job, {{"cells", std::to_string(job.N)}, {"R", num(job.R)}, {"cond", num(cond)},
                    {"hamiltonian_file", "hamiltonian.ham"}});
  return 0;
}

int run_transform(const Job& job) {
  require_tolerances(job);
  if (job.x_count < 2 || !(job.x_max > job.x_min)) config_error("sample grid needs x-count >= 2 and x-max > x-min");
  auto H = load_hamiltonian(job);
  auto f = load_function(job);
  auto w = load_weight(job, false);
  const double r = job.r > 0.0 ? job.r : hamiltonian_span(H.get()).second;

  std::vector<double> re, im;
  for (std::size_t i = 0; i < job.x_count; ++i) {
    re.push_back(job.x_min + (job.x_max - job.x_min) * static_cast<double>(i) / static_cast<double>(job.x_count - 1));
    im.push_back(0.0);
  }
  for (const auto& [a, b] : parse_points(job.z)) {
    re.push_back(a);
    im.push_back(b);
  }
  std::vector<double> F(2 * re.size());
  check(canon_transform(H.get(), f.get(), r, re.size(), re.data(), im.data(), F.data()));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < re.size(); ++i) rows.push_back({re[i], im[i], F[2 * i], F[2 * i + 1]});
  const std::string path = out_path(job, "transform.txt");
  write_table(path, "#transform v1 r=" + num(r) + " z_re z_im F_re F_im", rows);

  Report report{{"r", num(r)}, {"points", std::to_string(rows.size())}};
  if (w) {
    const double X = job.X > 0.0 ? job.X : 1000.0 / r;
    canon_isometry_report iso;
    check(canon_isometry(H.get(), w.get(), f.get(), r, X, &iso));
    report.insert(report.end(), {{"X", num(X)},
                                 {"mu_norm2", num(iso.mu_norm2)},
                                 {"tail", num(iso.tail_estimate)},
                                 {"f_norm2", num(iso.f_norm2)},
                                 {"residual", num(iso.residual)}});
  }
  report.emplace_back("transform_file", "transform.txt");
  emit_report(job, report);
  return 0;
}

int run_factorize(const Job& job) {
  require_grid(job);
  auto w = load_weight(job);
  canon_factorization* fp = nullptr;
  check(canon_factorize(w.get(), job.R, job.N, &fp));
  FactorPtr F(fp);
  canon_factor_report rep;
  check(canon_factorization_report(F.get(), &rep));
  const std::string a_path = out_path(job, "A.matrix");
  const std::string l_path = out_path(job, "L.matrix");
  check(canon_factorization_save(F.get(), a_path.c_str(), l_path.c_str()));
  Report report{{"residual", num(rep.residual)},
                {"cond", num(rep.cond)},
                {"leakage", num(rep.leakage)},
                {"oracle_deviation", num(rep.oracle_deviation)},
                {"c1", num(rep.c1)},
                {"c2", num(rep.c2)},
                {"eig_min", num(rep.eig_min)},
                {"eig_max", num(rep.eig_max)},
                {"ill_conditioned", rep.ill_conditioned ? "1" : "0"},
                {"A_file", "A.matrix"},
                {"L_file", "L.matrix"}};
  std::ostringstream os;
  for (const auto& [k, v] : report) os << k << '=' << v << '\n';
  std::ofstream(out_path(job, "report.txt"), std::ios::binary) << os.str();
  emit_report(job, report);
  return 0;
}

int run_verify(const Job& job) {
  const int n = canon_acceptance_count();
  int failed = 0;
  std::ostringstream log;
  for (int id = 1; id <= n; ++id) {
    int passed = 0;
    char line[1024];
    check(canon_acceptance_run(id, job.seed, &passed, line, sizeof line));
    if (!passed) ++failed;
    std::cout << line << std::endl;
    log << line << '\n';
  }
  std::ofstream(out_path(job, "acceptance.txt"), std::ios::binary) << log.str();
  std::cout << "summary passed=" << (n - failed) << " failed=" << failed << '\n';
  return failed == 0 ? 0 : 1;
}

void print_error(canon_status s, const std::string& reason) {
  std::cerr << "error kind=" << canon_status_name(s) << " code=" << static_cast<int>(s) << " reason=\"" << reason
            << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical systems, spectral measures and Wiener-Hopf factorization."};
  app.set_config("--config", "", "key = value config file; [section] names match subcommands");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", canon_version());

  Job job;
  app.add_option("--out", job.out_dir, "Output directory")->capture_default_str();
  app.add_option("--report-format", job.report_format, "Report layout on stdout")
      ->check(CLI::IsMember({"kv", "tsv"}))
      ->capture_default_str();

  auto add_weight = [&](CLI::App* sub) {
    sub->add_option("--weight", job.weight, "Closed-form weight, e.g. \"step level=2 half_width=1\"");
    sub->add_option("--weight-file", job.weight_file, "Weight samples file");
    sub->add_option("--truncate", job.truncate, "Replace w by 1 beyond |x| > j");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--R", job.R, "Interval length")->capture_default_str();
    sub->add_option("--N", job.N, "Cell count")->capture_default_str();
  };
  auto add_xgrid = [&](CLI::App* sub) {
    sub->add_option("--x-min", job.x_min)->capture_default_str();
    sub->add_option("--x-max", job.x_max)->capture_default_str();
    sub->add_option("--x-count", job.x_count)->capture_default_str();
  };

  auto* forward = app.add_subcommand("forward", "Transfer matrices and density samples of a Hamiltonian");
  forward->add_option("--hamiltonian", job.hamiltonian, "Hamiltonian file");
  forward->add_option("--z", job.z, "Spectral points re,im");
  forward->add_option("--eps-density", job.eps_density)->capture_default_str();
  forward->add_option("--extend-tail", job.extend_tail)->capture_default_str();
  add_xgrid(forward);

  auto* weyl = app.add_subcommand("weyl", "Weyl function on a set of points");
  weyl->add_option("--hamiltonian", job.hamiltonian, "Hamiltonian file");
  weyl->add_option("--z", job.z, "Spectral points re,im");
  weyl->add_option("--tol-weyl", job.tol_weyl)->capture_default_str();
  weyl->add_option("--extend-tail", job.extend_tail)->capture_default_str();

  auto* szego = app.add_subcommand("szego", "Szego functional K(mu, iy)");
  add_weight(szego);
  szego->add_option("--y", job.y, "Heights")->capture_default_str();

  auto* a2 = app.add_subcommand("a2", "A2 characteristics of a half-line function");
  a2->add_option("--function", job.function, "Half-line function file");
  a2->add_option("--budget", job.budget, "Dyadic refinement budget")->capture_default_str();
  a2->add_option("--window-length", job.window_length)->capture_default_str();
  a2->add_option("--window-offset", job.window_offset)->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "Split f = f1 + f2 with f1 in L1 and f2 in L2");
  decompose->add_option("--function", job.function, "Half-line function file");

  auto* invert = app.add_subcommand("invert", "Hamiltonian with a given spectral weight");
  add_weight(invert);
  add_grid(invert);

  auto* transform = app.add_subcommand("transform", "Generalized Fourier transform and isometry check");
  transform->add_option("--hamiltonian", job.hamiltonian, "Hamiltonian file");
  transform->add_option("--function", job.function, "Half-line function file");
  transform->add_option("--r", job.r, "Support end (default: Hamiltonian end)");
  transform->add_option("--z", job.z, "Extra points re,im");
  transform->add_option("--X", job.X, "Integration cutoff (default 1000/r)");
  add_weight(transform);
  add_xgrid(transform);

  auto* factorize = app.add_subcommand("factorize", "Wiener-Hopf factorization of a Toeplitz operator");
  add_weight(factorize);
  add_grid(factorize);

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", job.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    for (auto& c : what)
      if (c == '\n') c = ' ';
    print_error(CANON_ERR_PARSE, what);
    return kExitParse;
  }

  try {
    if (*forward) return run_forward(job);
    if (*weyl) return run_weyl(job);
    if (*szego) return run_szego(job);
    if (*a2) return run_a2(job);
    if (*decompose) return run_decompose(job);
    if (*invert) return run_invert(job);
    if (*transform) return run_transform(job);
    if (*factorize) return run_factorize(job);
    if (*verify) return run_verify(job);
  } catch (const Failure& f) {
    print_error(f.status, f.reason);
    return static_cast<int>(f.status);
  }
  return 0;
}
