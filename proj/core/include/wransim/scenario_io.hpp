#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wransim/config.hpp"
#include "wransim/sweep.hpp"

namespace wransim {

// Parse failure; the message carries "origin:line: what".
struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedScenario {
  ScenarioConfig cfg;
  std::optional<SweepSpec> sweep;  // present when the file has a [sweep] section
};

// Sectioned key = value text. Unknown sections and keys are rejected with
// their line number; [scenario] must provide cells, channels, and seed.
ParsedScenario parse_config_text(std::string_view text, const std::string& origin);
ParsedScenario parse_config_file(const std::filesystem::path& file);

// Fully resolved scenario, one key per line. parse(dump(cfg)) reproduces
// cfg exactly; numbers use the shortest round-trip form.
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace wransim
