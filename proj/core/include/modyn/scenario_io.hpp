#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "modyn/scenario.hpp"

namespace modyn {

// Reads and validates a scenario file. Structural problems (unreadable file,
// bad JSON, wrong types, unknown keys, ragged matrices) throw ParseError;
// model-invariant breaches throw ValidationError.
[[nodiscard]] Scenario parse_scenario(const std::filesystem::path& path);

// Same contract for in-memory text; `origin` names the source in messages.
[[nodiscard]] Scenario parse_scenario_text(std::string_view text,
                                           std::string_view origin = "<memory>");

// Serializes a scenario to the same JSON schema parse_scenario reads. A
// nonempty `comment` is stored under the optional "comment" key.
[[nodiscard]] std::string emit_scenario(const Scenario& scenario,
                                        std::string_view comment = {});

// The bundled seven-agent crossing scenario: two cyclist pairs approaching
// from opposite sides, three car drivers between them, attraction inside
// each group and mutual repulsion between the drivers and both pairs.
[[nodiscard]] Scenario intersection_example();

// The same scenario as schema JSON, including a comment that records how the
// private rates were chosen.
[[nodiscard]] std::string intersection_example_json();

}  // namespace modyn
