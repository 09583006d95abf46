#pragma once

#include <map>
#include <string>
#include <string_view>

namespace vsg::prompts {

// Template names, matching the files under core/prompts.
inline constexpr std::string_view kFrontView = "front_view";
inline constexpr std::string_view kViewAttributes = "view_attributes";
inline constexpr std::string_view kAggregateAttributes = "aggregate_attributes";
inline constexpr std::string_view kRelationEnrichment = "relation_enrichment";
inline constexpr std::string_view kGrounding = "grounding";

/// Raw template text. Throws InvalidArgument for an unknown name.
const std::string& get(std::string_view name);

/// Template with every `{key}` replaced by its value.
std::string render(std::string_view name, const std::map<std::string, std::string>& vars = {});

/// Task name from the `[task:NAME vN]` tag on a prompt's first line; empty if untagged.
std::string task_of(std::string_view prompt);

}  // namespace vsg::prompts
