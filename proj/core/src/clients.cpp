#include "vsg/clients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "vsg/errors.hpp"
#include "vsg/image_io.hpp"
#include "vsg/live_clients.hpp"
#include "vsg/offline_clients.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<const char*, std::string AttributeSet::*>, 5> kFields{{
    {"color", &AttributeSet::color},
    {"geometry", &AttributeSet::geometry},
    {"functionality", &AttributeSet::functionality},
    {"structural_details", &AttributeSet::structural_details},
    {"caption", &AttributeSet::caption},
}};

// Most frequent non-empty value; ties go to the value that appeared first.
std::string majority(const std::vector<std::string>& values) {
  std::vector<std::pair<std::string, std::size_t>> counts;
  for (const auto& v : values) {
    if (v.empty()) continue;
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == v; });
    if (it == counts.end()) {
      counts.emplace_back(v, 1);
    } else {
      ++it->second;
    }
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

std::string value_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& item : v) parts.push_back(value_to_string(item));
    return join(parts, ", ");
  }
  return v.dump();
}

}  // namespace

ReferenceDatabase ReferenceDatabase::load(const std::filesystem::path& directory) {
  const auto manifest_path = directory / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open reference manifest", manifest_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("reference manifest: ") + e.what(), "byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw ParseError("reference manifest must be an object", "/");
  ReferenceDatabase db;
  db.directory = directory;
  for (const auto& [label, file] : doc.items()) {
    if (!file.is_string()) throw ParseError("manifest entry must be a file name", "/" + label);
    db.manifest.emplace(label, file.get<std::string>());
  }
  return db;
}

std::optional<RasterImage> lookup_reference(const ReferenceDatabase& db, std::string_view class_label) {
  auto it = db.manifest.find(std::string(class_label));
  if (it == db.manifest.end()) return std::nullopt;
  const auto path = db.directory / it->second;
  if (!std::filesystem::exists(path)) throw IoError("reference image missing", path.string());
  return read_png(path);
}

FrontViewJudgment FrontViewJudgment::from_confidences(std::vector<double> confidences) {
  FrontViewJudgment j;
  for (auto& c : confidences) c = std::isfinite(c) ? std::clamp(c, 0.0, 1.0) : 0.0;
  j.per_view_confidence = std::move(confidences);
  for (std::size_t i = 1; i < j.per_view_confidence.size(); ++i) {
    if (j.per_view_confidence[i] > j.per_view_confidence[j.best_index]) j.best_index = i;
  }
  return j;
}

ViewAttributes view_attributes_from_json(const json& object) {
  if (!object.is_object()) throw ResponseParseError("attribute record is not an object", object.dump());
  ViewAttributes record;
  for (const auto& [key, member] : kFields) {
    auto it = object.find(key);
    if (it == object.end()) {
      record.missing_keys.emplace_back(key);
    } else {
      record.values.*member = value_to_string(*it);
    }
  }
  for (const auto& [key, value] : object.items()) {
    const bool standard = std::any_of(kFields.begin(), kFields.end(),
                                      [&](const auto& f) { return key == f.first; });
    if (!standard) record.values.extra[key] = value_to_string(value);
  }
  return record;
}

json to_json(const ViewAttributes& record) {
  json out = json::object();
  for (const auto& [key, member] : kFields) out[key] = record.values.*member;
  for (const auto& [key, value] : record.values.extra) out[key] = value;
  return out;
}

AttributeSet majority_attributes(std::span<const ViewAttributes> records) {
  if (records.empty()) throw EmptyInput("no attribute records to aggregate");
  AttributeSet out;
  for (const auto& [key, member] : kFields) {
    if (member == &AttributeSet::caption) continue;
    std::vector<std::string> values;
    for (const auto& r : records) values.push_back(r.values.*member);
    out.*member = majority(values);
  }
  for (const auto& r : records) {
    if (r.values.caption.size() > out.caption.size()) out.caption = r.values.caption;
  }
  std::vector<std::string> extra_keys;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.values.extra) {
      if (std::find(extra_keys.begin(), extra_keys.end(), k) == extra_keys.end()) extra_keys.push_back(k);
    }
  }
  for (const auto& k : extra_keys) {
    std::vector<std::string> values;
    for (const auto& r : records) {
      auto it = r.values.extra.find(k);
      values.push_back(it == r.values.extra.end() ? std::string() : it->second);
    }
    if (auto v = majority(values); !v.empty()) out.extra[k] = v;
  }
  return out;
}

AttributeSet aggregate_attributes(std::span<const ViewAttributes> records, TextModel* consolidator) {
  if (records.empty()) throw EmptyInput("no attribute records to aggregate");
  if (consolidator == nullptr) return majority_attributes(records);

  json context = {{"records", json::array()}};
  for (const auto& r : records) context["records"].push_back(to_json(r));
  const auto reply = consolidator->complete_text(prompts::render(prompts::kAggregateAttributes),
                                                 context.dump());
  const auto body = extract_json_object(reply);
  json parsed = json::parse(body, nullptr, false);
  if (body.empty() || parsed.is_discarded()) {
    throw ResponseParseError("attribute consolidation reply is not JSON", reply);
  }
  return view_attributes_from_json(parsed).values;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void ClientConfig::validate() const {
  if (max_retries < 0) throw InvalidArgument("client max_retries must be >= 0");
  if (max_concurrent < 1) throw InvalidArgument("client max_concurrent must be >= 1");
  if (!(timeout_s > 0.0)) throw InvalidArgument("client timeout must be positive");
}

void ClientConfig::apply_environment() {
  if (const char* url = std::getenv("VIZOR_API_URL"); url && *url) endpoint = url;
  if (const char* key = std::getenv("VIZOR_API_KEY"); key && *key) api_key = key;
}

Clients make_clients(const ClientConfig& config) {
  config.validate();
  Clients clients;
  if (config.offline) {
    clients.vision = std::make_shared<OfflineVisionModel>();
    clients.text = std::make_shared<OfflineTextModel>();
    clients.embedding = std::make_shared<HashingEmbeddingModel>();
    clients.offline = true;
    return clients;
  }

  std::shared_ptr<Transport> transport;
  if (!config.replay_dir.empty()) {
    transport = std::make_shared<ReplayTransport>(config.replay_dir);
  } else {
    if (config.endpoint.empty()) {
      throw InvalidArgument("live mode needs an endpoint (config [client] endpoint or VIZOR_API_URL)");
    }
    transport = std::make_shared<HttpTransport>(
        config.endpoint, config.api_key,
        std::chrono::milliseconds(static_cast<long>(config.timeout_s * 1000.0)));
    if (!config.record_dir.empty()) {
      transport = std::make_shared<RecordingTransport>(transport, config.record_dir);
    }
  }
  RetryPolicy retry;
  retry.max_retries = config.max_retries;
  auto service = std::make_shared<ChatService>(transport, config, retry);
  clients.vision = std::make_shared<LiveVisionModel>(service);
  clients.text = std::make_shared<LiveTextModel>(service);
  clients.embedding = std::make_shared<LiveEmbeddingModel>(service);
  clients.offline = false;
  return clients;
}

}  // namespace vsg
