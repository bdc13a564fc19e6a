#include "modyn/variant.hpp"

#include <stdexcept>
#include <string>

namespace modyn {

std::string_view to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::kIsolated:
      return "isolated";
    case ModelVariant::kAttract:
      return "attract";
    case ModelVariant::kFull:
      return "full";
  }
  throw std::invalid_argument("unknown model variant");
}

ModelVariant variant_from_string(std::string_view name) {
  if (name == "isolated") {
    return ModelVariant::kIsolated;
  }
  if (name == "attract") {
    return ModelVariant::kAttract;
  }
  if (name == "full") {
    return ModelVariant::kFull;
  }
  throw std::invalid_argument("unknown model variant \"" + std::string(name) +
                              "\"; expected isolated, attract or full");
}

}  // namespace modyn
