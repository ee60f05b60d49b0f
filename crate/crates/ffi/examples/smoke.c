#include <stdio.h>
#include "dyndiv.h"

static const char *CONFIG =
    "family = \"pauli\"\n"
    "rates = [1.0, 1.0, { kind = \"tanh\", a = -1.0, b = 1.0, c = 0.0 }]\n"
    "horizon = 5.0\n"
    "grid = 21\n";

int main(void) {
  DyndivReport *report = NULL;
  if (dyndiv_analyze(CONFIG, &report) != DYNDIV_STATUS_OK) {
    fprintf(stderr, "%s\n", dyndiv_last_error_message());
    return 1;
  }
  DyndivSummary summary;
  dyndiv_report_summary(report, &summary);
  printf("points %zu cp %d p %d d %d\n", dyndiv_report_len(report), summary.cp, summary.p, summary.d);
  dyndiv_report_free(report);

  double rates[4] = {-1.0, 1.0, 1.0, 1.0};
  DyndivRateVerdict v;
  if (dyndiv_classify_gpc(rates, 4, 3, &v) != DYNDIV_STATUS_OK) {
    return 1;
  }
  printf("gpc d %d\n", v.d);
  if (dyndiv_classify_gpc(rates, 3, 3, &v) != DYNDIV_STATUS_CONFIG) {
    return 1;
  }
  printf("error %s\n", dyndiv_last_error_message());
  return 0;
}
