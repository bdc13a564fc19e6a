#pragma once

#include <string_view>

namespace modyn {

// Which interaction terms take part in a computation. Isolated keeps only the
// private chains, Attract adds the attraction terms, Full adds repulsion too.
enum class ModelVariant {
  kIsolated,
  kAttract,
  kFull,
};

[[nodiscard]] std::string_view to_string(ModelVariant variant);

// Accepts "isolated", "attract" and "full"; throws std::invalid_argument
// otherwise.
[[nodiscard]] ModelVariant variant_from_string(std::string_view name);

}  // namespace modyn
