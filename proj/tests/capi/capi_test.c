#include <loj/loj.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: CHECK(%s)\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

static void release(char** s) {
  loj_string_free(*s);
  *s = NULL;
}

static int contains(const char* s, const char* needle) { return s && strstr(s, needle) != NULL; }

static void test_version(void) {
  CHECK(strlen(loj_version()) > 0);
  CHECK(strcmp(loj_last_error(), "") == 0);
}

static void test_poly_roundtrip(void) {
  loj_poly* p = NULL;
  CHECK(loj_poly_parse("x^2*y + x", NULL, &p) == LOJ_OK);
  CHECK(p != NULL);
  CHECK(loj_poly_varcount(p) == 2);
  char* vars = NULL;
  CHECK(loj_poly_vars(p, &vars) == LOJ_OK);
  CHECK(strcmp(vars, "x,y") == 0);
  loj_string_free(vars);

  char* text = NULL;
  CHECK(loj_poly_to_string(p, &text) == LOJ_OK);
  loj_poly* back = NULL;
  CHECK(loj_poly_parse(text, "x,y", &back) == LOJ_OK);
  char* text2 = NULL;
  CHECK(loj_poly_to_string(back, &text2) == LOJ_OK);
  CHECK(strcmp(text, text2) == 0);
  loj_string_free(text);
  loj_string_free(text2);
  loj_poly_free(back);
  loj_poly_free(p);
}

static void test_family(void) {
  loj_poly* f = NULL;
  CHECK(loj_poly_family(1, 1, &f) == LOJ_OK);
  CHECK(loj_poly_varcount(f) == 3);
  char* text = NULL;
  CHECK(loj_poly_to_string(f, &text) == LOJ_OK);
  CHECK(strcmp(text, "x - 3*x^3*y^2 + 2*x^4*y^3 + y*z") == 0);
  loj_string_free(text);
  loj_poly_free(f);

  char* js = NULL;
  CHECK(loj_family_report(2, 3, 1, &js) == LOJ_OK);
  CHECK(contains(js, "\"pass\":true"));
  release(&js);
}

static void test_errors(void) {
  loj_poly* p = NULL;
  CHECK(loj_poly_parse("x +* y", NULL, &p) == LOJ_ERR_INPUT);
  CHECK(p == NULL);
  CHECK(strlen(loj_last_error()) > 0);

  CHECK(loj_poly_family(0, 1, &p) == LOJ_ERR_INPUT);
  CHECK(loj_poly_parse(NULL, NULL, &p) == LOJ_ERR_INPUT);
  CHECK(loj_poly_parse("x", NULL, NULL) == LOJ_ERR_INPUT);

  /* a success clears the message */
  CHECK(loj_poly_parse("x", NULL, &p) == LOJ_OK);
  CHECK(strcmp(loj_last_error(), "") == 0);

  loj_curve* c = NULL;
  CHECK(loj_curve_parse("(t, t^2)", 64, &c) == LOJ_OK);
  char* js = NULL;
  CHECK(loj_curve_report(p, c, &js) == LOJ_ERR_DIMENSION);
  CHECK(js == NULL);
  loj_curve_free(c);
  loj_poly_free(p);

  loj_config* cfg = NULL;
  CHECK(loj_config_new(&cfg) == LOJ_OK);
  CHECK(loj_config_set(cfg, "starts", "0") == LOJ_ERR_INPUT);
  CHECK(loj_config_set(cfg, "bogus", "1") == LOJ_ERR_INPUT);
  CHECK(loj_config_set(cfg, "mu", "abc") == LOJ_ERR_INPUT);
  loj_config_free(cfg);

  CHECK(loj_verify(0, 2, 1, 1, NULL, &js) == LOJ_ERR_INPUT);
  CHECK(loj_verify(1, 1, 1, 1, "middle=abc", &js) == LOJ_ERR_INPUT);

  /* freeing NULL is a no-op */
  loj_poly_free(NULL);
  loj_curve_free(NULL);
  loj_config_free(NULL);
  loj_string_free(NULL);
}

static void test_curve_report(void) {
  loj_poly* g = NULL;
  CHECK(loj_poly_parse("x^2*y + x", NULL, &g) == LOJ_OK);
  loj_curve* c = NULL;
  CHECK(loj_curve_parse("(t, -1/2*t^-1)", 64, &c) == LOJ_OK);
  CHECK(loj_curve_dim(c) == 2);
  char* js = NULL;
  CHECK(loj_curve_report(g, c, &js) == LOJ_OK);
  CHECK(contains(js, "\"L\":\"-2/1\""));
  CHECK(contains(js, "\"fails\":true"));
  release(&js);
  loj_curve_free(c);
  loj_poly_free(g);

  loj_poly* f = NULL;
  CHECK(loj_poly_family(2, 1, &f) == LOJ_OK);
  CHECK(loj_curve_psi(2, 1, &c) == LOJ_OK);
  CHECK(loj_curve_report(f, c, &js) == LOJ_OK);
  CHECK(contains(js, "\"L\":\"-2/1\""));
  CHECK(contains(js, "\"not_quasitame\":true"));
  release(&js);
  loj_curve_free(c);
  loj_poly_free(f);
}

static void test_trace_and_verify(void) {
  char* js = NULL;
  CHECK(loj_contradiction_trace(2, 3, 1.0, 0.0, &js) == LOJ_OK);
  CHECK(contains(js, "\"contradiction\":true"));
  release(&js);

  CHECK(loj_verify(1, 2, 1, 2, NULL, &js) == LOJ_OK);
  CHECK(contains(js, "\"passed\":4"));
  release(&js);

  CHECK(loj_verify(1, 1, 1, 1, "middle=-4", &js) == LOJ_OK);
  CHECK(contains(js, "\"pass\":false"));
  release(&js);

  loj_poly* m = NULL;
  CHECK(loj_poly_family_mutated(1, 1, -4, &m) == LOJ_OK);
  char* text = NULL;
  CHECK(loj_poly_to_string(m, &text) == LOJ_OK);
  CHECK(contains(text, "4*x^3*y^2"));
  loj_string_free(text);
  loj_poly_free(m);
}

static void test_numeric(void) {
  loj_config* cfg = NULL;
  CHECK(loj_config_new(&cfg) == LOJ_OK);
  CHECK(loj_config_set(cfg, "starts", "8") == LOJ_OK);
  CHECK(loj_config_set(cfg, "seed", "7") == LOJ_OK);
  const double seed[4] = {1.0, 0.0, 0.0, 0.0};
  CHECK(loj_config_add_seed(cfg, seed, 2) == LOJ_OK);
  char* js = NULL;
  CHECK(loj_config_json(cfg, &js) == LOJ_OK);
  CHECK(contains(js, "\"starts\":8"));
  CHECK(contains(js, "\"seed\":7"));
  release(&js);

  loj_poly* g = NULL;
  CHECK(loj_poly_parse("x", "x,y", &g) == LOJ_OK);
  CHECK(loj_phi_at(g, 10.0, cfg, &js) == LOJ_OK);
  CHECK(contains(js, "\"phi\":1.0"));
  release(&js);

  /* seed with the wrong dimension */
  loj_poly* g3 = NULL;
  CHECK(loj_poly_parse("x", "x,y,z", &g3) == LOJ_OK);
  CHECK(loj_phi_at(g3, 10.0, cfg, &js) == LOJ_ERR_DIMENSION);
  loj_poly_free(g3);

  CHECK(loj_phi_at(g, -1.0, cfg, &js) == LOJ_ERR_INPUT);

  const double radii[3] = {10.0, 100.0, 1000.0};
  CHECK(loj_mtame_probe(g, radii, 3, NULL, &js) == LOJ_ERR_INPUT);
  CHECK(js == NULL);
  CHECK(loj_mtame_probe(g, radii, 3, cfg, &js) == LOJ_OK);
  CHECK(contains(js, "\"increasing\":true"));
  release(&js);

  CHECK(loj_estimate_linfty(g, 10.0, 1000.0, 2, cfg, &js) == LOJ_ERR_INPUT);

  /* no descent can converge in one iteration */
  loj_poly* f = NULL;
  CHECK(loj_poly_family(1, 1, &f) == LOJ_OK);
  loj_config* tight = NULL;
  CHECK(loj_config_new(&tight) == LOJ_OK);
  CHECK(loj_config_set(tight, "max_iters", "1") == LOJ_OK);
  CHECK(loj_config_set(tight, "starts", "4") == LOJ_OK);
  CHECK(loj_estimate_linfty(f, 10.0, 1000.0, 4, tight, &js) == LOJ_ERR_NUMERIC);
  CHECK(strlen(loj_last_error()) > 0);
  loj_config_free(tight);
  loj_poly_free(f);

  loj_poly_free(g);
  loj_config_free(cfg);
}

int main(void) {
  test_version();
  test_poly_roundtrip();
  test_family();
  test_errors();
  test_curve_report();
  test_trace_and_verify();
  test_numeric();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi_test: all checks passed\n");
  return 0;
}
