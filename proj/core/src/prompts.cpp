#include "vsg/prompts.hpp"

#include "vsg/errors.hpp"

namespace vsg::prompts {
namespace detail {
const std::map<std::string, std::string>& embedded();
}

const std::string& get(std::string_view name) {
  const auto& table = detail::embedded();
  auto it = table.find(std::string(name));
  if (it == table.end()) throw InvalidArgument("unknown prompt template: " + std::string(name));
  return it->second;
}

std::string render(std::string_view name, const std::map<std::string, std::string>& vars) {
  std::string text = get(name);
  for (const auto& [key, value] : vars) {
    const std::string placeholder = "{" + key + "}";
    for (auto pos = text.find(placeholder); pos != std::string::npos;
         pos = text.find(placeholder, pos + value.size())) {
      text.replace(pos, placeholder.size(), value);
    }
  }
  return text;
}

std::string task_of(std::string_view prompt) {
  constexpr std::string_view kOpen = "[task:";
  if (!prompt.starts_with(kOpen)) return {};
  const auto end = prompt.find_first_of(" ]", kOpen.size());
  if (end == std::string_view::npos) return {};
  return std::string(prompt.substr(kOpen.size(), end - kOpen.size()));
}

}  // namespace vsg::prompts
