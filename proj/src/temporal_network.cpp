#include "apsched/temporal_network.hpp"

#include <deque>

namespace apsched {

void TemporalNetwork::require_after(TaskId before, TaskId after, Tick weight) {
  out_[static_cast<std::size_t>(before) + 1].push_back({static_cast<std::size_t>(after) + 1, weight});
}

void TemporalNetwork::release(TaskId task, Tick earliest) {
  out_[0].push_back({static_cast<std::size_t>(task) + 1, earliest});
}

std::optional<std::vector<Tick>> TemporalNetwork::least_solution(Tick cap, const std::vector<Tick>* init) const {
  const std::size_t n = out_.size();
  std::vector<Tick> dist(n, 0);
  if (init) {
    for (std::size_t i = 1; i < n; ++i) dist[i] = std::max<Tick>(0, (*init)[i - 1]);
  }
  // Label-correcting longest paths. A positive cycle keeps raising labels,
  // so the cap doubles as cycle detection.
  std::deque<std::size_t> queue;
  std::vector<char> queued(n, 1);
  for (std::size_t i = 0; i < n; ++i) queue.push_back(i);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (const Arc& a : out_[u]) {
      const Tick cand = dist[u] + a.weight;
      if (cand > dist[a.to]) {
        if (cand > cap) return std::nullopt;
        dist[a.to] = cand;
        if (!queued[a.to]) {
          queued[a.to] = 1;
          queue.push_back(a.to);
        }
      }
    }
  }
  return std::vector<Tick>(dist.begin() + 1, dist.end());
}

}  // namespace apsched
