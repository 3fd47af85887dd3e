#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "metro/geo.hpp"

namespace metro {

using StationIndex = std::size_t;
/// Ordered stations served by one metro line.
using Line = std::vector<StationIndex>;

struct Edge {
  StationIndex a = 0;  // a < b
  StationIndex b = 0;
  double length_m = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph induced by a set of lines over fixed station positions.
class LineNetwork {
 public:
  /// Throws LineTooShort, LoopInLine or InvalidStationIndex. Consecutive pairs
  /// shared by several lines collapse into one edge.
  static LineNetwork build(std::span<const Line> lines, std::span<const PlanarPoint> stations);

  std::size_t station_count() const noexcept { return station_count_; }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  /// Sorted by (a, b).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  struct Neighbor {
    StationIndex station;
    double length_m;
  };
  std::span<const Neighbor> neighbors(StationIndex s) const noexcept { return adjacency_[s]; }

 private:
  std::size_t station_count_ = 0;
  std::vector<Line> lines_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Connected-component id per station, numbered in order of lowest member.
std::vector<std::size_t> component_labels(const LineNetwork& net);

/// True iff one component spans every station (a station on no line is its
/// own component).
bool is_connected(const LineNetwork& net);

struct DistanceMatrix {
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

  std::size_t size = 0;
  std::vector<double> values;  // row-major size x size
  bool reachable = true;

  double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * size + j]; }
};

/// Shortest-path lengths over the network (Dijkstra from every source).
/// With transfer_penalty_m > 0 the search runs on a line-expanded graph in
/// which every change of line adds that many equivalent meters.
DistanceMatrix all_pairs_distances(const LineNetwork& net, double transfer_penalty_m = 0.0);

}  // namespace metro
