#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "panelkit/geometry.hpp"

namespace panelkit {

/// Uniform-grid hash for fixed-radius neighbour queries. Each stored point
/// carries a caller-defined payload.
template <typename Payload>
class PointIndex {
 public:
  explicit PointIndex(double cell) : cell_(cell > 0.0 ? cell : 1.0) {}

  void insert(const Point3& p, Payload payload) {
    buckets_[key(cell_of(p))].push_back(items_.size());
    items_.push_back({p, std::move(payload)});
  }

  struct Hit {
    const Point3* point;
    const Payload* payload;
    double dist;
  };

  /// Nearest stored point within `radius` accepted by `filter`. Ties go to
  /// the earliest inserted point so queries are deterministic.
  template <typename Filter>
  std::optional<Hit> nearest(const Point3& q, double radius, Filter&& filter) const {
    std::optional<Hit> best;
    std::size_t best_idx = std::numeric_limits<std::size_t>::max();
    visit(q, radius, [&](std::size_t idx) {
      const auto& it = items_[idx];
      if (!filter(it.payload)) return;
      const double d = distance(it.point, q);
      if (d > radius) return;
      if (!best || d < best->dist || (d == best->dist && idx < best_idx)) {
        best = Hit{&it.point, &it.payload, d};
        best_idx = idx;
      }
    });
    return best;
  }

  std::optional<Hit> nearest(const Point3& q, double radius) const {
    return nearest(q, radius, [](const Payload&) { return true; });
  }

  /// Every accepted point within `radius`, nearest first (ties by insertion order).
  template <typename Filter>
  std::vector<Hit> within(const Point3& q, double radius, Filter&& filter) const {
    std::vector<std::pair<std::size_t, Hit>> found;
    visit(q, radius, [&](std::size_t idx) {
      const auto& it = items_[idx];
      if (!filter(it.payload)) return;
      const double d = distance(it.point, q);
      if (d <= radius) found.push_back({idx, Hit{&it.point, &it.payload, d}});
    });
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
      return a.second.dist != b.second.dist ? a.second.dist < b.second.dist : a.first < b.first;
    });
    std::vector<Hit> out;
    out.reserve(found.size());
    for (auto& f : found) out.push_back(f.second);
    return out;
  }

 private:
  struct Item {
    Point3 point;
    Payload payload;
  };
  struct Cell {
    std::int64_t i, j, k;
  };

  Cell cell_of(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_)),
            static_cast<std::int64_t>(std::floor(p.z / cell_))};
  }
  static std::uint64_t key(const Cell& c) {
    auto mix = [](std::int64_t v) { return static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ull; };
    return mix(c.i) ^ (mix(c.j) >> 1) ^ (mix(c.k) << 1) ^ static_cast<std::uint64_t>(c.k * 73856093);
  }

  template <typename F>
  void visit(const Point3& q, double radius, F&& f) const {
    const Cell lo = cell_of(q - Point3{radius, radius, radius});
    const Cell hi = cell_of(q + Point3{radius, radius, radius});
    for (auto i = lo.i; i <= hi.i; ++i) {
      for (auto j = lo.j; j <= hi.j; ++j) {
        for (auto k = lo.k; k <= hi.k; ++k) {
          auto b = buckets_.find(key({i, j, k}));
          if (b == buckets_.end()) continue;
          for (std::size_t idx : b->second) {
            const Cell c = cell_of(items_[idx].point);
            if (c.i == i && c.j == j && c.k == k) f(idx);
          }
        }
      }
    }
  }

  double cell_;
  std::vector<Item> items_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace panelkit
