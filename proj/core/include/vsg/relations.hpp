#pragma once

#include <span>
#include <string>
#include <vector>

#include "vsg/clients.hpp"
#include "vsg/geometry.hpp"
#include "vsg/types.hpp"

namespace vsg {

struct RelationRuleConfig {
  double sector_width_deg = 45.0;
  double contact_epsilon_m = 0.05;
  double overlap_min = 0.3;
  double near_scale = 1.5;
  double far_fraction = 0.5;

  void validate() const;
};

/// Horizontal label for a signed angle. Sectors are centered on multiples of
/// the width starting at 0 (front); an angle on a boundary belongs to the
/// counterclockwise sector.
std::string sector_label(double angle_deg, double sector_width_deg = 45.0);

/// Size of the scene used by the "far" rule: the diagonal of the box spanning
/// twice the largest horizontal vertex distance from the scene center and the
/// full vertical range. Equal to the AABB diagonal for a box-shaped scene
/// centered on its center, and unchanged by rotations about Z.
double scene_span(const SceneMesh& mesh);

/// Base labels in fixed order: one sector label, at most one vertical label,
/// at most one proximity label.
std::vector<std::string> classify_pair(const PairGeometry& pair, const OrientedBox& subject_box,
                                       const OrientedBox& object_box, double scene_span,
                                       const RelationRuleConfig& config);

/// Object box aligned with its front direction (world AABB when it has none).
OrientedBox object_frame_box(const SceneMesh& mesh, const ObjectInstance& object);

struct EnrichmentOptions {
  TextModel* model = nullptr;
  /// Node features sent alongside the relations.
  std::span<const Node> nodes;
  std::size_t batch_size = 200;
};

/// One directed edge per ordered pair (subject i, object j), i != j, labelled
/// from the object's frame. Throws MissingFront when an object lacks a front.
std::vector<Edge> build_edges(std::span<const ObjectInstance> objects, const SceneMesh& mesh,
                              const RelationRuleConfig& config,
                              const EnrichmentOptions* enrichment = nullptr);

/// Replaces relation strings with model-enriched ones. Endpoints, distances
/// and angles are never modified.
void enrich_edges(std::vector<Edge>& edges, const EnrichmentOptions& options);

}  // namespace vsg
