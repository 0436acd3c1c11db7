#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dexarb/errors.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

using LineVertexId = std::uint32_t;

// Vertex of the line graph: the directed token edge first -> second, or the
// extra source vertex (O, v0) when `source_flag` is set.
struct LineVertex {
  TokenId first = 0;
  TokenId second = 0;
  bool source_flag = false;

  bool operator==(const LineVertex&) const = default;
};

struct LineEdge {
  LineVertexId from = 0;
  LineVertexId to = 0;
  double weight = 0.0;  // weight of the token edge named by `to`
};

// Directed line graph of a TokenGraph with immediate backtracks removed:
// (i, j) -> (j, l) exists iff l != i. Vertex k corresponds to token edge k, so
// vertices are ordered by (first, second). Adjacency is stored CSR-style.
// The TokenGraph must outlive the LineGraph.
class LineGraph {
 public:
  LineGraph() = default;

  explicit LineGraph(const TokenGraph& g) : origin_(&g) {
    const auto n = g.edge_count();
    vertices_.reserve(n);
    offsets_.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = g.edge(k);
      vertices_.push_back({e.from, e.to, false});
      for (std::size_t c = g.out_begin(e.to); c < g.out_end(e.to); ++c) {
        if (g.edge(c).to == e.from) continue;
        targets_.push_back(static_cast<LineVertexId>(c));
        weights_.push_back(g.edge(c).weight);
      }
      offsets_.push_back(targets_.size());
    }
  }

  const TokenGraph& origin() const { return *origin_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return targets_.size(); }
  const LineVertex& vertex(LineVertexId v) const { return vertices_[v]; }
  const std::vector<LineVertex>& vertices() const { return vertices_; }

  std::span<const LineVertexId> successors(LineVertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> successor_weights(LineVertexId v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }

  // All edges in relaxation order: by from-vertex, then to-vertex.
  std::vector<LineEdge> edges() const {
    std::vector<LineEdge> out;
    out.reserve(edge_count());
    for (LineVertexId v = 0; v < vertex_count(); ++v) {
      for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) out.push_back({v, targets_[k], weights_[k]});
    }
    return out;
  }

  bool operator==(const LineGraph& o) const {
    return origin_ == o.origin_ && vertices_ == o.vertices_ && offsets_ == o.offsets_ && targets_ == o.targets_ &&
           weights_ == o.weights_;
  }

 private:
  const TokenGraph* origin_ = nullptr;
  std::vector<LineVertex> vertices_;
  std::vector<std::size_t> offsets_{0};
  std::vector<LineVertexId> targets_;
  std::vector<double> weights_;
};

inline LineGraph build_line_graph(const TokenGraph& g) { return LineGraph(g); }

// Overlay adding the source vertex (O, v0) to a shared base line graph. The
// source gets id base.vertex_count() and one out-edge per token edge leaving
// v0. Nothing points into it. The base is never modified.
class SourcedLineGraph {
 public:
  SourcedLineGraph(const LineGraph& base, TokenId v0) : base_(&base), source_token_(v0) {
    const auto& g = base.origin();
    if (v0 >= g.token_count()) throw UnknownTokenError("source token id " + std::to_string(v0) + " is unknown");
    for (std::size_t c = g.out_begin(v0); c < g.out_end(v0); ++c) {
      targets_.push_back(static_cast<LineVertexId>(c));
      weights_.push_back(g.edge(c).weight);
    }
  }

  const LineGraph& base() const { return *base_; }
  const TokenGraph& origin() const { return base_->origin(); }
  TokenId source_token() const { return source_token_; }
  LineVertexId source_vertex() const { return static_cast<LineVertexId>(base_->vertex_count()); }
  std::size_t vertex_count() const { return base_->vertex_count() + 1; }
  std::size_t edge_count() const { return base_->edge_count() + targets_.size(); }

  LineVertex vertex(LineVertexId v) const {
    if (v == source_vertex()) return {source_token_, source_token_, true};
    return base_->vertex(v);
  }

  std::span<const LineVertexId> successors(LineVertexId v) const {
    return v == source_vertex() ? std::span<const LineVertexId>(targets_) : base_->successors(v);
  }
  std::span<const double> successor_weights(LineVertexId v) const {
    return v == source_vertex() ? std::span<const double>(weights_) : base_->successor_weights(v);
  }

 private:
  const LineGraph* base_;
  TokenId source_token_;
  std::vector<LineVertexId> targets_;
  std::vector<double> weights_;
};

inline SourcedLineGraph add_source_vertex(const LineGraph& lg, TokenId v0) { return SourcedLineGraph(lg, v0); }

inline const LineGraph& remove_source_vertex(const SourcedLineGraph& slg) { return slg.base(); }

}  // namespace dexarb
