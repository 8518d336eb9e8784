#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "canon/grid_hamiltonian.hpp"
#include "canon/mat2.hpp"
#include "canon/spectral_measure.hpp"
#include "canon/weights_a2.hpp"

namespace canon {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

/// Whole-token parse; throws ParseError naming `what` on failure.
double parse_double(std::string_view token, std::string_view what);

/// #canon-hamiltonian v1, optional "#unimodular=1", rows "t_start t_end h1 h h2".
void write_hamiltonian(std::ostream& out, const Hamiltonian& H);
Hamiltonian read_hamiltonian(std::istream& in);

/// #weight v1, rows "x w"; read back as a piecewise-linear sampled weight.
void write_weight_samples(std::ostream& out, const std::vector<double>& x, const std::vector<double>& w);
Weight read_weight(std::istream& in);

/// #halfline v1, optional "#tail=<v>", rows "t_start t_end value".
void write_halfline(std::ostream& out, const HalfLineFunction& f);
HalfLineFunction read_halfline(std::istream& in);

/// #matrix v1 N=<n>, then n comma-separated rows.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& A);
Eigen::MatrixXd read_matrix(std::istream& in);

/// key=value lines.
using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(std::ostream& out, const Report& report);
std::map<std::string, std::string> read_report(std::istream& in);

/// Closed-form weight from "<name> key=value ...", e.g. "step level=2 half_width=1".
/// Names: constant (c), step (level, half_width), cosine-bump (amplitude, half_width),
/// sinc2-bump (amplitude, bandwidth = 1).
Weight parse_weight_spec(std::string_view spec);

void save_text(const std::string& path, const std::string& content);
std::string load_text(const std::string& path);

}  // namespace canon
