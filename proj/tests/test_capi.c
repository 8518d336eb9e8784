/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "canon/canon.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_errors(void) {
  canon_weight* w = NULL;
  EXPECT(canon_weight_from_spec("nonsense", &w) == CANON_ERR_PARSE);
  EXPECT(w == NULL);
  EXPECT(strstr(canon_last_error(), "nonsense") != NULL);
  EXPECT(canon_weight_from_spec("step level=-2 half_width=1", &w) == CANON_ERR_DOMAIN);
  EXPECT(canon_weight_from_spec(NULL, &w) == CANON_ERR_DOMAIN);
  EXPECT(strcmp(canon_status_name(CANON_ERR_CONVERGENCE), "convergence") == 0);

  canon_hamiltonian* h = NULL;
  EXPECT(canon_hamiltonian_load("/nonexistent/file.ham", &h) == CANON_ERR_PARSE);
  EXPECT(canon_hamiltonian_constant(1.0, 1.0, 1, &h) == CANON_OK);
  double m[2];
  EXPECT(canon_weyl_function(h, 0.0, 0.1, 1e-12, 0, m) == CANON_ERR_CONVERGENCE);
  EXPECT(strchr(canon_last_error(), '\n') == NULL);
  canon_hamiltonian_free(h);
  canon_hamiltonian_free(NULL);
}

static void test_forward(void) {
  const double nodes[3] = {0.0, 1.0, 2.0};
  const double cells[2][3] = {{2.0, 0.0, 0.5}, {1.0, 0.0, 1.0}};
  canon_hamiltonian* h = NULL;
  EXPECT(canon_hamiltonian_from_cells(2, nodes, cells, 1, &h) == CANON_OK);
  EXPECT(canon_hamiltonian_cell_count(h) == 2);
  double c[5];
  EXPECT(canon_hamiltonian_cell(h, 1, c) == CANON_OK);
  EXPECT(c[0] == 1.0 && c[1] == 2.0 && c[2] == 1.0);
  EXPECT(canon_hamiltonian_cell(h, 2, c) == CANON_ERR_DOMAIN);

  double M[8];
  EXPECT(canon_transfer_matrix(h, 2.0, 0.0, 0.0, M) == CANON_OK);
  EXPECT(M[0] == 1.0 && M[6] == 1.0 && M[2] == 0.0);

  const double bad[1][3] = {{1.0, 2.0, 1.0}};
  canon_hamiltonian* g = NULL;
  EXPECT(canon_hamiltonian_from_cells(1, nodes, bad, 0, &g) == CANON_ERR_DOMAIN);
  canon_hamiltonian_free(h);

  canon_hamiltonian* free_h = NULL;
  EXPECT(canon_hamiltonian_constant(1.0, 3.0, 2, &free_h) == CANON_OK);
  double m[2];
  EXPECT(canon_weyl_function(free_h, 0.5, 1.0, 1e-10, 1, m) == CANON_OK);
  EXPECT(fabs(m[0]) < 1e-8 && fabs(m[1] - 1.0) < 1e-8);
  canon_hamiltonian_free(free_h);
}

static void test_pipeline(void) {
  canon_weight* w = NULL;
  EXPECT(canon_weight_from_spec("constant c=1", &w) == CANON_OK);
  canon_factorization* f = NULL;
  EXPECT(canon_factorize(w, 4.0, 8, &f) == CANON_OK);
  canon_factor_report rep;
  EXPECT(canon_factorization_report(f, &rep) == CANON_OK);
  EXPECT(rep.residual == 0.0 && rep.leakage == 0.0 && rep.cond == 1.0);
  canon_factorization_free(f);

  double K = 1.0;
  EXPECT(canon_szego_K(w, 0.0, 1.0, &K) == CANON_OK);
  EXPECT(K == 0.0);
  canon_weight_free(w);

  EXPECT(canon_weight_from_spec("step level=2 half_width=1", &w) == CANON_OK);
  canon_hamiltonian* h = NULL;
  double cond = 0.0;
  EXPECT(canon_inverse_spectral(w, 10.0, 64, &h, &cond) == CANON_OK);
  EXPECT(cond >= 1.0);
  EXPECT(canon_hamiltonian_cell_count(h) == 64);
  canon_hamiltonian_free(h);
  canon_weight_free(w);
}

static void test_format(void) {
  char buf[32];
  EXPECT(canon_format_double(0.1, buf, sizeof buf) == 3);
  EXPECT(strcmp(buf, "0.1") == 0);
  EXPECT(canon_format_double(1.0 / 3.0, buf, 4) > 3);
  EXPECT(strlen(buf) == 3);
}

int main(void) {
  test_errors();
  test_forward();
  test_pipeline();
  test_format();
  EXPECT(canon_acceptance_count() == 11);
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi ok\n");
  return 0;
}
