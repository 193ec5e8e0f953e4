#ifndef BETALAB_COMMANDS_HPP
#define BETALAB_COMMANDS_HPP

#include <string>

namespace betalab {

// Executes one run described by a JSON config (see configs/ for the schema;
// "command" selects equilibrium / correction / logq / sample / kernel /
// universality / check). Returns the JSON report, which embeds the fully
// resolved config and any CSV payloads under "csv". Throws domain_error on
// invalid configs and precision_error on accuracy failures.
std::string run_command(const std::string& config_json);

}  // namespace betalab

#endif
