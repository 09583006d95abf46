#include "vsg/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vsg/errors.hpp"
#include "vsg/hashing.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using nlohmann::json;
using Setter = std::function<void(PipelineConfig&, const std::string&)>;

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
  std::istringstream in(raw);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + raw + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const auto v = to_lower(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("config key '" + key + "': expected a boolean, got '" + raw + "'");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto getter) {
      t[key] = [key, getter](PipelineConfig& c, const std::string& raw) {
        auto& field = getter(c);
        field = parse_value<std::remove_reference_t<decltype(field)>>(key, raw);
      };
    };
    auto flag = [&t](const std::string& key, auto getter) {
      t[key] = [key, getter](PipelineConfig& c, const std::string& raw) { getter(c) = parse_bool(key, raw); };
    };
    auto text = [&t](const std::string& key, auto getter) {
      t[key] = [getter](PipelineConfig& c, const std::string& raw) { getter(c) = raw; };
    };
    num("rig.num_views", [](PipelineConfig& c) -> auto& { return c.front.rig.num_views; });
    num("rig.radius_scale", [](PipelineConfig& c) -> auto& { return c.front.rig.radius_scale; });
    num("rig.min_radius_m", [](PipelineConfig& c) -> auto& { return c.front.rig.min_radius_m; });
    num("front.threshold", [](PipelineConfig& c) -> auto& { return c.front.threshold; });
    num("render.width", [](PipelineConfig& c) -> auto& { return c.front.render.width; });
    num("render.height", [](PipelineConfig& c) -> auto& { return c.front.render.height; });
    num("render.vertical_fov_deg", [](PipelineConfig& c) -> auto& { return c.front.render.vertical_fov_deg; });
    num("render.near_plane", [](PipelineConfig& c) -> auto& { return c.front.render.near_plane; });
    num("relations.sector_width_deg", [](PipelineConfig& c) -> auto& { return c.relations.sector_width_deg; });
    num("relations.contact_epsilon_m", [](PipelineConfig& c) -> auto& { return c.relations.contact_epsilon_m; });
    num("relations.overlap_min", [](PipelineConfig& c) -> auto& { return c.relations.overlap_min; });
    num("relations.near_scale", [](PipelineConfig& c) -> auto& { return c.relations.near_scale; });
    num("relations.far_fraction", [](PipelineConfig& c) -> auto& { return c.relations.far_fraction; });
    num("grounding.top_k", [](PipelineConfig& c) -> auto& { return c.grounding.top_k; });
    text("client.endpoint", [](PipelineConfig& c) -> auto& { return c.client.endpoint; });
    text("client.api_key", [](PipelineConfig& c) -> auto& { return c.client.api_key; });
    text("client.chat_model", [](PipelineConfig& c) -> auto& { return c.client.chat_model; });
    text("client.embedding_model", [](PipelineConfig& c) -> auto& { return c.client.embedding_model; });
    num("client.timeout_s", [](PipelineConfig& c) -> auto& { return c.client.timeout_s; });
    num("client.max_retries", [](PipelineConfig& c) -> auto& { return c.client.max_retries; });
    num("client.max_concurrent", [](PipelineConfig& c) -> auto& { return c.client.max_concurrent; });
    flag("client.offline", [](PipelineConfig& c) -> auto& { return c.client.offline; });
    text("client.replay_dir", [](PipelineConfig& c) -> auto& { return c.client.replay_dir; });
    text("client.record_dir", [](PipelineConfig& c) -> auto& { return c.client.record_dir; });
    flag("pipeline.enrich", [](PipelineConfig& c) -> auto& { return c.enrich; });
    num("pipeline.enrich_batch_size", [](PipelineConfig& c) -> auto& { return c.enrich_batch_size; });
    flag("pipeline.keep_going", [](PipelineConfig& c) -> auto& { return c.keep_going; });
    num("pipeline.workers", [](PipelineConfig& c) -> auto& { return c.workers; });
    text("pipeline.reference_db", [](PipelineConfig& c) -> auto& { return c.reference_db; });
    text("pipeline.dump_views_dir", [](PipelineConfig& c) -> auto& { return c.dump_views_dir; });
    flag("pipeline.record_timings", [](PipelineConfig& c) -> auto& { return c.record_timings; });
    return t;
  }();
  return table;
}

void apply_tree(PipelineConfig& config, const boost::property_tree::ptree& tree) {
  const auto& table = setters();
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      throw InvalidArgument("config key '" + section + "' is outside any section");
    }
    for (const auto& [key, value] : entries) {
      const auto full = section + "." + key;
      auto it = table.find(full);
      if (it == table.end()) throw InvalidArgument("unknown config key '" + full + "'");
      it->second(config, value.get_value<std::string>());
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  front.validate();
  relations.validate();
  grounding.validate();
  client.validate();
  if (enrich_batch_size == 0) throw InvalidArgument("enrich_batch_size must be positive");
}

json PipelineConfig::to_json() const {
  return {
      {"rig", {{"num_views", front.rig.num_views},
               {"radius_scale", front.rig.radius_scale},
               {"min_radius_m", front.rig.min_radius_m}}},
      {"front", {{"threshold", front.threshold}}},
      {"render", {{"width", front.render.width},
                  {"height", front.render.height},
                  {"vertical_fov_deg", front.render.vertical_fov_deg},
                  {"near_plane", front.render.near_plane}}},
      {"relations", {{"sector_width_deg", relations.sector_width_deg},
                     {"contact_epsilon_m", relations.contact_epsilon_m},
                     {"overlap_min", relations.overlap_min},
                     {"near_scale", relations.near_scale},
                     {"far_fraction", relations.far_fraction}}},
      {"grounding", {{"top_k", grounding.top_k}}},
      {"client", {{"endpoint", client.endpoint},
                  {"chat_model", client.chat_model},
                  {"embedding_model", client.embedding_model},
                  {"timeout_s", client.timeout_s},
                  {"max_retries", client.max_retries},
                  {"max_concurrent", client.max_concurrent},
                  {"offline", client.offline}}},
      {"pipeline", {{"enrich", enrich},
                    {"enrich_batch_size", enrich_batch_size},
                    {"keep_going", keep_going}}},
  };
}

std::string PipelineConfig::hash() const { return sha256_hex(to_json().dump()); }

void apply_config_text(PipelineConfig& config, const std::string& ini_text) {
  std::istringstream in(ini_text);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(e.message(), "line " + std::to_string(e.line()));
  }
  apply_tree(config, tree);
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

}  // namespace vsg
