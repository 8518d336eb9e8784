#include "canon/file_formats.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "canon/errors.hpp"

namespace canon {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, std::string_view what) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("cannot parse " + std::string(what) + " from '" + std::string(token) + "'");
  }
  return v;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Reads the header line and returns the remaining lines, with the header's extra tokens in `header_rest`.
std::vector<std::string> read_body(std::istream& in, std::string_view magic, std::string* header_rest = nullptr) {
  std::string line;
  while (std::getline(in, line) && trim(line).empty()) {
  }
  const std::string head = trim(line);
  if (head.rfind(magic, 0) != 0) throw ParseError("expected header '" + std::string(magic) + "'");
  if (header_rest) *header_rest = trim(std::string_view(head).substr(magic.size()));
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(trim(line));
  return lines;
}

bool directive(const std::string& line, std::string_view key, std::string& value) {
  if (line.size() < 2 || line[0] != '#') return false;
  const std::string body = trim(std::string_view(line).substr(1));
  if (body.rfind(key, 0) != 0 || body.size() <= key.size() || body[key.size()] != '=') return false;
  value = body.substr(key.size() + 1);
  return true;
}

}  // namespace

void write_hamiltonian(std::ostream& out, const Hamiltonian& H) {
  out << "#canon-hamiltonian v1\n";
  if (H.unimodular()) out << "#unimodular=1\n";
  const Grid& g = H.grid();
  for (std::size_t i = 0; i < H.cell_count(); ++i) {
    const CellMatrix& c = H.cell(i);
    out << format_double(g.left(i)) << ' ' << format_double(g.right(i)) << ' ' << format_double(c.h1) << ' '
        << format_double(c.h) << ' ' << format_double(c.h2) << '\n';
  }
}

Hamiltonian read_hamiltonian(std::istream& in) {
  bool unimodular = false;
  std::vector<double> nodes;
  std::vector<CellMatrix> cells;
  for (const std::string& line : read_body(in, "#canon-hamiltonian v1")) {
    std::string value;
    if (directive(line, "unimodular", value)) {
      unimodular = parse_double(value, "unimodular flag") != 0.0;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto tok = split_ws(line);
    if (tok.size() != 5) throw ParseError("Hamiltonian row needs 5 columns: '" + line + "'");
    const double a = parse_double(tok[0], "t_start");
    const double b = parse_double(tok[1], "t_end");
    if (nodes.empty()) {
      nodes.push_back(a);
    } else if (a != nodes.back()) {
      throw ParseError("Hamiltonian rows are not contiguous at t=" + tok[0]);
    }
    nodes.push_back(b);
    cells.push_back({parse_double(tok[2], "h1"), parse_double(tok[3], "h"), parse_double(tok[4], "h2")});
  }
  if (cells.empty()) throw ParseError("Hamiltonian file has no rows");
  std::optional<Hamiltonian> H;
  try {
    H.emplace(Grid(std::move(nodes)), std::move(cells), unimodular);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid Hamiltonian grid: ") + e.what());
  }
  require_valid(*H);
  return std::move(*H);
}

void write_weight_samples(std::ostream& out, const std::vector<double>& x, const std::vector<double>& w) {
  out << "#weight v1\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << format_double(x[i]) << ' ' << format_double(w[i]) << '\n';
}

Weight read_weight(std::istream& in) {
  std::vector<double> x, w;
  for (const std::string& line : read_body(in, "#weight v1")) {
    if (line.empty() || line[0] == '#') continue;
    const auto tok = split_ws(line);
    if (tok.size() != 2) throw ParseError("weight row needs 2 columns: '" + line + "'");
    x.push_back(parse_double(tok[0], "x"));
    w.push_back(parse_double(tok[1], "w"));
  }
  try {
    return Weight::sampled(std::move(x), std::move(w));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid weight samples: ") + e.what());
  }
}

void write_halfline(std::ostream& out, const HalfLineFunction& f) {
  out << "#halfline v1\n";
  if (f.tail) out << "#tail=" << format_double(*f.tail) << '\n';
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    out << format_double(f.grid.left(i)) << ' ' << format_double(f.grid.right(i)) << ' '
        << format_double(f.values[i]) << '\n';
  }
}

HalfLineFunction read_halfline(std::istream& in) {
  std::optional<double> tail;
  std::vector<double> nodes, values;
  for (const std::string& line : read_body(in, "#halfline v1")) {
    std::string value;
    if (directive(line, "tail", value)) {
      tail = parse_double(value, "tail");
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto tok = split_ws(line);
    if (tok.size() != 3) throw ParseError("halfline row needs 3 columns: '" + line + "'");
    const double a = parse_double(tok[0], "t_start");
    if (nodes.empty()) {
      nodes.push_back(a);
    } else if (a != nodes.back()) {
      throw ParseError("halfline rows are not contiguous at t=" + tok[0]);
    }
    nodes.push_back(parse_double(tok[1], "t_end"));
    values.push_back(parse_double(tok[2], "value"));
  }
  if (values.empty()) throw ParseError("halfline file has no rows");
  try {
    return HalfLineFunction(Grid(std::move(nodes)), std::move(values), tail);
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid halfline function: ") + e.what());
  }
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DomainError("matrix files hold square matrices");
  out << "#matrix v1 N=" << A.rows() << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ',';
      out << format_double(A(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::string rest;
  const auto lines = read_body(in, "#matrix v1", &rest);
  if (rest.rfind("N=", 0) != 0) throw ParseError("matrix header needs N=<n>");
  const double nd = parse_double(std::string_view(rest).substr(2), "N");
  if (!(nd >= 1.0) || nd != std::floor(nd)) throw ParseError("matrix size must be a positive integer");
  const auto n = static_cast<Eigen::Index>(nd);
  Eigen::MatrixXd A(n, n);
  Eigen::Index row = 0;
  for (const std::string& line : lines) {
    if (line.empty() || line[0] == '#') continue;
    if (row == n) throw ParseError("matrix file has more than N rows");
    std::string_view view(line);
    Eigen::Index col = 0;
    while (true) {
      const auto comma = view.find(',');
      if (col == n) throw ParseError("matrix row has more than N entries");
      A(row, col++) = parse_double(trim(view.substr(0, comma)), "matrix entry");
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (col != n) throw ParseError("matrix row has fewer than N entries");
    ++row;
  }
  if (row != n) throw ParseError("matrix file has fewer than N rows");
  return A;
}

void write_report(std::ostream& out, const Report& report) {
  for (const auto& [k, v] : report) out << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_report(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("report line is not key=value: '" + t + "'");
    out[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

Weight parse_weight_spec(std::string_view spec) {
  const auto tok = split_ws(std::string(spec));
  if (tok.empty()) throw ParseError("empty weight spec");
  std::map<std::string, double> params;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("weight parameter is not key=value: '" + tok[i] + "'");
    const std::string key = tok[i].substr(0, eq);
    params[key] = parse_double(std::string_view(tok[i]).substr(eq + 1), key);
  }
  const std::string& name = tok[0];
  auto take = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = params.find(key);
    if (it == params.end()) {
      if (fallback) return *fallback;
      throw ParseError("weight '" + name + "' needs parameter '" + key + "'");
    }
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto finish = [&](Weight w) {
    if (!params.empty()) throw ParseError("unknown parameter '" + params.begin()->first + "' for weight '" + name + "'");
    return w;
  };
  if (name == "constant") {
    const double c = take("c");
    return finish(Weight::constant(c));
  }
  if (name == "step") {
    const double level = take("level");
    const double hw = take("half_width");
    return finish(Weight::step(level, hw));
  }
  if (name == "cosine-bump") {
    const double amp = take("amplitude");
    const double hw = take("half_width");
    return finish(Weight::cosine_bump(amp, hw));
  }
  if (name == "sinc2-bump") {
    const double amp = take("amplitude");
    const double b = take("bandwidth", 1.0);
    return finish(Weight::sinc2_bump(amp, b));
  }
  throw ParseError("unknown weight '" + name + "'");
}

void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw DomainError("failed writing '" + path + "'");
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace canon
