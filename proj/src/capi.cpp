#include "canon/canon.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "canon/acceptance.hpp"
#include "canon/canonical_solver.hpp"
#include "canon/debranges_transform.hpp"
#include "canon/errors.hpp"
#include "canon/factorization.hpp"
#include "canon/file_formats.hpp"
#include "canon/grid_hamiltonian.hpp"
#include "canon/krein_inverse.hpp"
#include "canon/spectral_measure.hpp"
#include "canon/weights_a2.hpp"
#include "canon/weyl_spectral.hpp"

struct canon_hamiltonian {
  canon::Hamiltonian value;
};

struct canon_weight {
  canon::Weight value;
};

struct canon_halfline {
  canon::HalfLineFunction value;
};

struct canon_factorization {
  canon::FactorizationReport value;
};

namespace {

thread_local std::string last_error;

canon_status fail(canon_status s, const std::string& what) {
  last_error = what;
  // Keep the reason on one line.
  std::replace(last_error.begin(), last_error.end(), '\n', ' ');
  return s;
}

template <class F>
canon_status guarded(F&& body) {
  try {
    body();
    return CANON_OK;
  } catch (const canon::Error& e) {
    return fail(static_cast<canon_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CANON_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CANON_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw canon::DomainError(std::string("null argument: ") + what);
}

std::ifstream open_in(const char* path) {
  require(path, "path");
  std::ifstream in(path);
  if (!in) throw canon::ParseError(std::string("cannot open '") + path + "'");
  return in;
}

template <class W>
void write_file(const char* path, W&& writer) {
  require(path, "path");
  std::ostringstream os;
  writer(os);
  canon::save_text(path, os.str());
}

}  // namespace

extern "C" {

const char* canon_version(void) { return "1.0.0"; }

const char* canon_last_error(void) { return last_error.c_str(); }

const char* canon_status_name(canon_status s) {
  switch (s) {
    case CANON_OK: return "ok";
    case CANON_ERR_PARSE: return "parse";
    case CANON_ERR_DOMAIN: return "domain";
    case CANON_ERR_CONVERGENCE: return "convergence";
    case CANON_ERR_INTERNAL: break;
  }
  return "internal";
}

size_t canon_format_double(double x, char* buf, size_t len) {
  const std::string s = canon::format_double(x);
  if (buf != nullptr && len > 0) {
    const std::size_t n = std::min(s.size(), len - 1);
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

canon_status canon_hamiltonian_load(const char* path, canon_hamiltonian** out) {
  return guarded([&] {
    require(out, "out");
    auto in = open_in(path);
    *out = new canon_hamiltonian{canon::read_hamiltonian(in)};
  });
}

canon_status canon_hamiltonian_save(const canon_hamiltonian* H, const char* path) {
  return guarded([&] {
    require(H, "hamiltonian");
    write_file(path, [&](std::ostream& os) { canon::write_hamiltonian(os, H->value); });
  });
}

canon_status canon_hamiltonian_from_cells(size_t n, const double* nodes, const double (*cells)[3], int unimodular,
                                          canon_hamiltonian** out) {
  return guarded([&] {
    require(nodes, "nodes");
    require(cells, "cells");
    require(out, "out");
    std::vector<canon::CellMatrix> cs(n);
    for (std::size_t i = 0; i < n; ++i) cs[i] = {cells[i][0], cells[i][1], cells[i][2]};
    canon::Hamiltonian H(canon::Grid(std::vector<double>(nodes, nodes + n + 1)), std::move(cs), unimodular != 0);
    canon::require_valid(H);
    *out = new canon_hamiltonian{std::move(H)};
  });
}

canon_status canon_hamiltonian_constant(double c, double length, size_t cells, canon_hamiltonian** out) {
  return guarded([&] {
    require(out, "out");
    if (!(c > 0.0)) throw canon::DomainError("constant Hamiltonian needs c > 0");
    auto H = canon::Hamiltonian::constant({c, 0.0, 1.0 / c}, length, cells, true);
    canon::require_valid(H);
    *out = new canon_hamiltonian{std::move(H)};
  });
}

size_t canon_hamiltonian_cell_count(const canon_hamiltonian* H) { return H ? H->value.cell_count() : 0; }

canon_status canon_hamiltonian_cell(const canon_hamiltonian* H, size_t i, double out[5]) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    if (i >= H->value.cell_count()) throw canon::DomainError("cell index out of range");
    const auto& g = H->value.grid();
    const auto& c = H->value.cell(i);
    out[0] = g.left(i);
    out[1] = g.right(i);
    out[2] = c.h1;
    out[3] = c.h;
    out[4] = c.h2;
  });
}

canon_status canon_hamiltonian_dual(const canon_hamiltonian* H, canon_hamiltonian** out) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    *out = new canon_hamiltonian{canon::dual(H->value)};
  });
}

canon_status canon_hamiltonian_dilate(const canon_hamiltonian* H, double y, canon_hamiltonian** out) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    *out = new canon_hamiltonian{canon::dilate(H->value, y)};
  });
}

void canon_hamiltonian_free(canon_hamiltonian* H) { delete H; }

canon_status canon_transfer_matrix(const canon_hamiltonian* H, double t, double z_re, double z_im, double out[8]) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    const auto M = canon::transfer_matrix(H->value, t, {z_re, z_im}).M;
    const canon::cplx e[4] = {M.a, M.b, M.c, M.d};
    for (int k = 0; k < 4; ++k) {
      out[2 * k] = e[k].real();
      out[2 * k + 1] = e[k].imag();
    }
  });
}

canon_status canon_weyl_function(const canon_hamiltonian* H, double z_re, double z_im, double tol, int extend_tail,
                                 double out[2]) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    canon::WeylOptions opt;
    opt.tol = tol;
    opt.extend_tail = extend_tail != 0;
    const auto m = canon::weyl_function(H->value, {z_re, z_im}, opt);
    out[0] = m.real();
    out[1] = m.imag();
  });
}

canon_status canon_spectral_density(const canon_hamiltonian* H, double x, double eps, int extend_tail, double* out) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(out, "out");
    canon::WeylOptions opt;
    opt.extend_tail = extend_tail != 0;
    *out = canon::spectral_density(H->value, x, eps, opt);
  });
}

canon_status canon_weight_from_spec(const char* spec, canon_weight** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new canon_weight{canon::parse_weight_spec(spec)};
  });
}

canon_status canon_weight_load(const char* path, canon_weight** out) {
  return guarded([&] {
    require(out, "out");
    auto in = open_in(path);
    *out = new canon_weight{canon::read_weight(in)};
  });
}

canon_status canon_weight_sample_to_file(const canon_hamiltonian* H, double x_min, double x_max, size_t count,
                                         double eps, int extend_tail, const char* path) {
  return guarded([&] {
    require(H, "hamiltonian");
    if (count < 2 || !(x_max > x_min)) throw canon::DomainError("density grid needs count >= 2 and x_max > x_min");
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i)
      xs[i] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(count - 1);
    canon::WeylOptions opt;
    opt.extend_tail = extend_tail != 0;
    const canon::Weight w = canon::sampled_density(H->value, xs, eps, opt);
    std::vector<double> ws(count);
    for (std::size_t i = 0; i < count; ++i) ws[i] = w(xs[i]);
    write_file(path, [&](std::ostream& os) { canon::write_weight_samples(os, xs, ws); });
  });
}

canon_status canon_weight_truncate(const canon_weight* w, double j, canon_weight** out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    *out = new canon_weight{canon::Weight::truncated(w->value, j)};
  });
}

canon_status canon_weight_eval(const canon_weight* w, double x, double* out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    *out = w->value(x);
  });
}

canon_status canon_weight_bounds(const canon_weight* w, double out[2]) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    out[0] = w->value.lower_bound();
    out[1] = w->value.upper_bound();
  });
}

void canon_weight_free(canon_weight* w) { delete w; }

canon_status canon_szego_K(const canon_weight* w, double z_re, double z_im, double* out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    *out = canon::szego_K(canon::SpectralMeasure(w->value), {z_re, z_im});
  });
}

canon_status canon_inverse_spectral(const canon_weight* w, double R, size_t N, canon_hamiltonian** out,
                                    double* cond) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    auto res = canon::inverse_spectral_report(canon::SpectralMeasure(w->value), R, N);
    if (cond != nullptr) *cond = res.cond;
    *out = new canon_hamiltonian{std::move(res.H)};
  });
}

canon_status canon_halfline_load(const char* path, canon_halfline** out) {
  return guarded([&] {
    require(out, "out");
    auto in = open_in(path);
    *out = new canon_halfline{canon::read_halfline(in)};
  });
}

canon_status canon_halfline_save(const canon_halfline* f, const char* path) {
  return guarded([&] {
    require(f, "function");
    write_file(path, [&](std::ostream& os) { canon::write_halfline(os, f->value); });
  });
}

void canon_halfline_free(canon_halfline* f) { delete f; }

canon_status canon_a2_classical(const canon_halfline* f, int budget, double* out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = canon::a2_classical(f->value, budget);
  });
}

canon_status canon_a2_ell1(const canon_halfline* f, double window_length, double window_offset, double* out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = canon::a2_ell1(f->value, canon::A2Windows{window_length, window_offset});
  });
}

canon_status canon_norm_l1_l2(const canon_halfline* f, double* out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = canon::norm_L1_plus_L2(f->value);
  });
}

canon_status canon_decompose_l1_l2(const canon_halfline* f, canon_halfline** f1, canon_halfline** f2,
                                   double norms[3]) {
  return guarded([&] {
    require(f, "function");
    auto split = canon::decompose_L1_L2(f->value);
    if (norms != nullptr) {
      norms[0] = split.l1_norm;
      norms[1] = split.l2_norm;
      norms[2] = split.operational_norm;
    }
    if (f1 != nullptr) *f1 = new canon_halfline{std::move(split.f1)};
    if (f2 != nullptr) *f2 = new canon_halfline{std::move(split.f2)};
  });
}

canon_status canon_transform(const canon_hamiltonian* H, const canon_halfline* f, double r, size_t count,
                             const double* z_re, const double* z_im, double* out) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(f, "function");
    require(out, "out");
    std::vector<canon::cplx> zs(count);
    for (std::size_t i = 0; i < count; ++i) {
      require(z_re, "z_re");
      zs[i] = {z_re[i], z_im ? z_im[i] : 0.0};
    }
    const auto F = canon::f_mu_apply(H->value, canon::SampledFunction::from_halfline(f->value), r, zs);
    for (std::size_t i = 0; i < count; ++i) {
      out[2 * i] = F[i].real();
      out[2 * i + 1] = F[i].imag();
    }
  });
}

canon_status canon_isometry(const canon_hamiltonian* H, const canon_weight* w, const canon_halfline* f, double r,
                            double X, canon_isometry_report* out) {
  return guarded([&] {
    require(H, "hamiltonian");
    require(w, "weight");
    require(f, "function");
    require(out, "out");
    const auto rep = canon::isometry_report(H->value, canon::SpectralMeasure(w->value),
                                            canon::SampledFunction::from_halfline(f->value), r, X);
    *out = {rep.mu_norm2, rep.tail_estimate, rep.f_norm2, rep.residual};
  });
}

canon_status canon_factorize(const canon_weight* w, double R, size_t N, canon_factorization** out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    *out = new canon_factorization{canon::factor_via_transform(canon::SpectralMeasure(w->value), R, N)};
  });
}

canon_status canon_factorization_report(const canon_factorization* F, canon_factor_report* out) {
  return guarded([&] {
    require(F, "factorization");
    require(out, "out");
    const auto& r = F->value;
    *out = {r.residual, r.cond, r.leakage, r.oracle_deviation, r.c1, r.c2, r.eig_min, r.eig_max,
            r.ill_conditioned ? 1 : 0};
  });
}

canon_status canon_factorization_save(const canon_factorization* F, const char* a_path, const char* l_path) {
  return guarded([&] {
    require(F, "factorization");
    if (a_path != nullptr) write_file(a_path, [&](std::ostream& os) { canon::write_matrix(os, F->value.A); });
    if (l_path != nullptr) write_file(l_path, [&](std::ostream& os) { canon::write_matrix(os, F->value.L); });
  });
}

void canon_factorization_free(canon_factorization* F) { delete F; }

int canon_acceptance_count(void) { return canon::kCriterionCount; }

canon_status canon_acceptance_run(int id, uint64_t seed, int* passed, char* line, size_t line_len) {
  return guarded([&] {
    if (id < 1 || id > canon::kCriterionCount) throw canon::DomainError("criterion id out of range");
    const auto r = canon::run_criterion(id, seed);
    if (passed != nullptr) *passed = r.passed ? 1 : 0;
    if (line != nullptr && line_len > 0) {
      const std::string s = canon::format_result(r);
      const std::size_t n = std::min(s.size(), line_len - 1);
      std::memcpy(line, s.data(), n);
      line[n] = '\0';
    }
  });
}

}  // extern "C"
