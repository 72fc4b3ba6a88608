#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace codesign {

/// Text files from data/ compiled into the library (catalog, prompt templates, rubric).
/// Keys are paths relative to data/, e.g. "prompts/spatial_selection.txt".
std::optional<std::string_view> embedded_resource(std::string_view name);
std::vector<std::string_view> embedded_resource_names();

}  // namespace codesign
