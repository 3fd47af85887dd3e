#include "metro/netgraph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

#include "metro/error.hpp"

namespace metro {

namespace {

struct WeightedArc {
  std::size_t to;
  double weight;
};

using Graph = std::vector<std::vector<WeightedArc>>;

void dijkstra(const Graph& graph, std::size_t source, std::vector<double>& dist) {
  using Entry = std::pair<double, std::size_t>;
  std::fill(dist.begin(), dist.end(), DistanceMatrix::kUnreachable);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[source] = 0.0;
  frontier.emplace(0.0, source);
  while (!frontier.empty()) {
    const auto [d, u] = frontier.top();
    frontier.pop();
    if (d > dist[u]) continue;
    for (const WeightedArc& arc : graph[u]) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        frontier.emplace(nd, arc.to);
      }
    }
  }
}

// Node per station hub plus one per (line, position). Boarding or alighting
// costs half the penalty, so a line change costs the full penalty.
Graph expanded_graph(const LineNetwork& net, double penalty) {
  const std::size_t hubs = net.station_count();
  std::size_t total = hubs;
  for (const Line& line : net.lines()) total += line.size();
  Graph graph(total);
  std::size_t next = hubs;
  for (const Line& line : net.lines()) {
    for (std::size_t p = 0; p < line.size(); ++p) {
      const std::size_t node = next + p;
      graph[node].push_back({line[p], 0.5 * penalty});
      graph[line[p]].push_back({node, 0.5 * penalty});
      if (p + 1 < line.size()) {
        double length = 0.0;
        const StationIndex a = std::min(line[p], line[p + 1]);
        const StationIndex b = std::max(line[p], line[p + 1]);
        for (const auto& nb : net.neighbors(a)) {
          if (nb.station == b) length = nb.length_m;
        }
        graph[node].push_back({node + 1, length});
        graph[node + 1].push_back({node, length});
      }
    }
    next += line.size();
  }
  return graph;
}

}  // namespace

LineNetwork LineNetwork::build(std::span<const Line> lines, std::span<const PlanarPoint> stations) {
  LineNetwork net;
  net.station_count_ = stations.size();
  net.lines_.assign(lines.begin(), lines.end());

  std::vector<char> seen(stations.size(), 0);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const Line& line = lines[l];
    if (line.size() < 2) {
      throw MetroError(ErrorKind::LineTooShort, "line " + std::to_string(l) + " has fewer than 2 stations");
    }
    for (StationIndex s : line) {
      if (s >= stations.size()) {
        throw MetroError(ErrorKind::InvalidStationIndex,
                         "line " + std::to_string(l) + " references station " + std::to_string(s));
      }
      if (seen[s]) {
        throw MetroError(ErrorKind::LoopInLine,
                         "line " + std::to_string(l) + " visits station " + std::to_string(s) + " twice");
      }
      seen[s] = 1;
    }
    for (StationIndex s : line) seen[s] = 0;

    for (std::size_t p = 0; p + 1 < line.size(); ++p) {
      const StationIndex a = std::min(line[p], line[p + 1]);
      const StationIndex b = std::max(line[p], line[p + 1]);
      net.edges_.push_back({a, b, distance(stations[a], stations[b])});
    }
  }
  std::sort(net.edges_.begin(), net.edges_.end(),
            [](const Edge& l, const Edge& r) { return l.a != r.a ? l.a < r.a : l.b < r.b; });
  net.edges_.erase(std::unique(net.edges_.begin(), net.edges_.end(),
                               [](const Edge& l, const Edge& r) { return l.a == r.a && l.b == r.b; }),
                   net.edges_.end());

  net.adjacency_.resize(stations.size());
  for (const Edge& e : net.edges_) {
    net.adjacency_[e.a].push_back({e.b, e.length_m});
    net.adjacency_[e.b].push_back({e.a, e.length_m});
  }
  return net;
}

std::vector<std::size_t> component_labels(const LineNetwork& net) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(net.station_count(), kUnset);
  std::vector<StationIndex> stack;
  std::size_t next = 0;
  for (StationIndex s = 0; s < net.station_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const StationIndex u = stack.back();
      stack.pop_back();
      for (const auto& nb : net.neighbors(u)) {
        if (label[nb.station] == kUnset) {
          label[nb.station] = next;
          stack.push_back(nb.station);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const LineNetwork& net) {
  const auto labels = component_labels(net);
  return std::all_of(labels.begin(), labels.end(), [](std::size_t c) { return c == 0; });
}

DistanceMatrix all_pairs_distances(const LineNetwork& net, double transfer_penalty_m) {
  const std::size_t n = net.station_count();
  DistanceMatrix m;
  m.size = n;
  m.values.assign(n * n, DistanceMatrix::kUnreachable);

  Graph graph;
  if (transfer_penalty_m > 0.0) {
    graph = expanded_graph(net, transfer_penalty_m);
  } else {
    graph.resize(n);
    for (StationIndex s = 0; s < n; ++s) {
      for (const auto& nb : net.neighbors(s)) graph[s].push_back({nb.station, nb.length_m});
    }
  }

  std::vector<double> dist(graph.size());
  for (std::size_t src = 0; src < n; ++src) {
    dijkstra(graph, src, dist);
    for (std::size_t dst = 0; dst < n; ++dst) {
      double d = dist[dst];
      // Hub-to-hub paths include one boarding and one alighting.
      if (transfer_penalty_m > 0.0 && dst != src && d != DistanceMatrix::kUnreachable) d -= transfer_penalty_m;
      m.values[src * n + dst] = dst == src ? 0.0 : d;
      if (d == DistanceMatrix::kUnreachable) m.reachable = false;
    }
  }
  // Dijkstra from each end can differ in the last ulp; keep the matrix symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::min(m.values[i * n + j], m.values[j * n + i]);
      m.values[i * n + j] = d;
      m.values[j * n + i] = d;
    }
  }
  return m;
}

}  // namespace metro
