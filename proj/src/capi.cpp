#include "betalab.h"

#include <string>

#include "betalab/commands.hpp"
#include "betalab/errors.hpp"

struct betalab_result {
  int status = BETALAB_OK;
  std::string report;
};

extern "C" {

int betalab_run_json(const char* config_json, betalab_result** out) {
  auto* r = new betalab_result;
  auto fail = [&](int status, const char* kind, const std::string& msg) {
    r->status = status;
    // hand-rolled to avoid throwing while reporting an error
    std::string esc;
    for (char c : msg) {
      if (c == '"' || c == '\\') esc += '\\';
      if (c == '\n') { esc += "\\n"; continue; }
      esc += c;
    }
    r->report = std::string("{\"error\":\"") + esc + "\",\"kind\":\"" + kind + "\"}";
  };
  if (!config_json) {
    fail(BETALAB_ERR_DOMAIN, "domain", "null config");
  } else {
    try {
      r->report = betalab::run_command(config_json);
    } catch (const betalab::domain_error& e) {
      fail(BETALAB_ERR_DOMAIN, "domain", e.what());
    } catch (const betalab::precision_error& e) {
      fail(BETALAB_ERR_PRECISION, "precision", e.what());
    } catch (const std::exception& e) {
      fail(BETALAB_ERR_INTERNAL, "internal", e.what());
    }
  }
  int status = r->status;
  if (out) *out = r;
  else delete r;
  return status;
}

const char* betalab_result_report(const betalab_result* r) {
  return r ? r->report.c_str() : "";
}

int betalab_result_status(const betalab_result* r) {
  return r ? r->status : BETALAB_ERR_INTERNAL;
}

void betalab_result_free(betalab_result* r) { delete r; }

const char* betalab_version(void) { return "0.1.0"; }

}  // extern "C"
