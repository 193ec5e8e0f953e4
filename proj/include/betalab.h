#ifndef BETALAB_H
#define BETALAB_H

/* C interface to the betalab core. All work goes through a single
 * JSON-config entry point; results are returned as a JSON report attached
 * to an opaque handle that the caller must free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct betalab_result betalab_result;

/* Status codes, also used as CLI exit codes. */
enum {
  BETALAB_OK = 0,
  BETALAB_ERR_DOMAIN = 1,    /* bad config / validation failure */
  BETALAB_ERR_PRECISION = 2, /* quadrature or mixing accuracy failure */
  BETALAB_ERR_INTERNAL = 3
};

/* Runs one command described by a JSON config string. Always produces a
 * result handle (even on error, carrying the error report); returns one of
 * the status codes above. */
int betalab_run_json(const char* config_json, betalab_result** out);

/* JSON report (or error object) owned by the handle; valid until free. */
const char* betalab_result_report(const betalab_result* r);

int betalab_result_status(const betalab_result* r);

void betalab_result_free(betalab_result* r);

const char* betalab_version(void);

#ifdef __cplusplus
}
#endif

#endif
