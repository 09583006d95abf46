#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Geometry>

#include "vsg/clients.hpp"
#include "vsg/errors.hpp"
#include "vsg/geometry.hpp"
#include "vsg/grounding.hpp"
#include "vsg/transport.hpp"
#include "vsg/types.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline std::filesystem::path data_dir() { return VSG_TEST_DATA_DIR; }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vsg_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Angle between two vectors computed with atan2 of the cross and dot products,
/// independent of the arccos form used by the library.
inline double angle_between(const vsg::Vec3& a, const vsg::Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Reference index selection for the symmetric-front rule: linear scan keeping
/// the first strictly smaller angle.
inline std::size_t argmin_angle_oracle(const std::vector<vsg::Vec3>& candidates, const vsg::Vec3& centroid,
                                       const vsg::Vec3& scene_center) {
  const vsg::Vec3 target = scene_center - centroid;
  std::size_t best = 0;
  double best_angle = angle_between(candidates[0], target);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double a = angle_between(candidates[i], target);
    if (a < best_angle) {
      best_angle = a;
      best = i;
    }
  }
  return best;
}

/// Full stable sort by descending similarity; first `k` edge indices.
inline std::vector<std::size_t> prune_oracle(const std::vector<double>& similarity, std::size_t k) {
  std::vector<std::size_t> order(similarity.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return similarity[a] > similarity[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

/// Side of `p` relative to the directed line through `origin` along `front`:
/// +1 left, -1 right, from the 2D cross product.
inline int side_oracle(const vsg::Vec3& origin, const vsg::Vec3& front, const vsg::Vec3& p) {
  const double cross = front.x() * (p.y() - origin.y()) - front.y() * (p.x() - origin.x());
  return cross > 0 ? 1 : (cross < 0 ? -1 : 0);
}

/// Transport double that returns scripted responses and counts calls.
class ScriptedTransport final : public vsg::Transport {
 public:
  using Handler = std::function<vsg::HttpResponse(const std::string& path, const std::string& body)>;
  explicit ScriptedTransport(Handler handler) : handler_(std::move(handler)) {}
  vsg::HttpResponse post(const std::string& path, const std::string& body) override {
    ++calls;
    return handler_(path, body);
  }
  std::atomic<int> calls{0};

 private:
  Handler handler_;
};

/// Chat-completions reply body carrying `content`.
inline std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

/// Vision model that fails on the listed call indices and otherwise answers
/// with a fixed record.
class FlakyVision final : public vsg::VisionModel {
 public:
  explicit FlakyVision(std::set<std::size_t> failing) : failing_(std::move(failing)) {}
  vsg::FrontViewJudgment identify_front_view(const vsg::RasterImage*, std::span<const vsg::RasterImage> views,
                                             std::string_view) override {
    return vsg::FrontViewJudgment::from_confidences(std::vector<double>(views.size(), 0.1));
  }
  vsg::ViewAttributes extract_view_attributes(const vsg::RasterImage&, std::string_view label) override {
    const auto index = calls_++;
    if (failing_.count(index)) {
      throw vsg::ServiceError(vsg::ServiceError::Kind::kTimeout, "injected timeout on view " + std::to_string(index));
    }
    vsg::ViewAttributes r;
    r.values.color = "red";
    r.values.caption = "a red " + std::string(label);
    return r;
  }

 private:
  std::set<std::size_t> failing_;
  std::size_t calls_ = 0;
};

/// Random graph with `n` nodes, dense edges with random relation words.
inline vsg::SceneGraph random_graph(std::mt19937_64& rng, int n) {
  static const std::vector<std::string> labels{"chair", "table", "lamp", "sofa", "bin", "monitor", "bed", "door"};
  static const std::vector<std::string> relations{"left of", "right of", "in front of", "behind", "near", "on",
                                                  "far", "above", "below", "under"};
  std::uniform_int_distribution<std::size_t> pick_label(0, labels.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_rel(0, relations.size() - 1);
  std::uniform_real_distribution<double> coord(-5, 5);
  vsg::SceneGraph g;
  for (int i = 0; i < n; ++i) {
    vsg::Node node;
    node.id = i + 1;
    node.class_label = labels[pick_label(rng)];
    node.attributes.caption = "a " + node.class_label;
    node.centroid = {coord(rng), coord(rng), coord(rng)};
    node.aabb = {node.centroid.array() - 0.5, node.centroid.array() + 0.5};
    g.nodes.push_back(node);
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      vsg::Edge e;
      e.subject_id = g.nodes[i].id;
      e.object_id = g.nodes[j].id;
      e.relation = relations[pick_rel(rng)];
      e.distance_m = (g.nodes[i].centroid - g.nodes[j].centroid).norm();
      g.edges.push_back(e);
    }
  }
  return g;
}

}  // namespace testing
