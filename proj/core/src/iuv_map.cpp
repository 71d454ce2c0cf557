#include "bodyfit/iuv_map.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bodyfit {

using nlohmann::json;

int IUVMap::foreground_count() const {
  int n = 0;
  for (std::size_t i = 0; i < data.size(); i += 3) n += data[i] != 0;
  return n;
}

IUVMap read_iuv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open IUV file " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "IUVR", 4) != 0) {
    throw std::runtime_error("bad IUV magic in " + path);
  }
  std::uint8_t dims[8];
  in.read(reinterpret_cast<char*>(dims), 8);
  if (!in) throw std::runtime_error("truncated IUV header in " + path);
  auto u32 = [&](int o) {
    return static_cast<std::uint32_t>(dims[o]) |
           static_cast<std::uint32_t>(dims[o + 1]) << 8 |
           static_cast<std::uint32_t>(dims[o + 2]) << 16 |
           static_cast<std::uint32_t>(dims[o + 3]) << 24;
  };
  const std::uint32_t w = u32(0), h = u32(4);
  if (w == 0 || h == 0 || w > 1 << 16 || h > 1 << 16) {
    throw std::runtime_error("bad IUV dimensions in " + path);
  }
  IUVMap map(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(map.data.data()),
          static_cast<std::streamsize>(map.data.size()));
  if (!in) throw std::runtime_error("truncated IUV data in " + path);
  for (std::size_t i = 0; i < map.data.size(); i += 3) {
    if (map.data[i] == 0 && (map.data[i + 1] != 0 || map.data[i + 2] != 0)) {
      throw std::runtime_error("background pixel with nonzero UV in " + path);
    }
  }
  return map;
}

void write_iuv(const std::string& path, const IUVMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write IUV file " + path);
  out.write("IUVR", 4);
  auto put_u32 = [&](std::uint32_t v) {
    const std::uint8_t b[4] = {static_cast<std::uint8_t>(v),
                               static_cast<std::uint8_t>(v >> 8),
                               static_cast<std::uint8_t>(v >> 16),
                               static_cast<std::uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  put_u32(static_cast<std::uint32_t>(map.width));
  put_u32(static_cast<std::uint32_t>(map.height));
  out.write(reinterpret_cast<const char*>(map.data.data()),
            static_cast<std::streamsize>(map.data.size()));
}

bool KeypointPartTable::consistent(int keypoint_id, int part) const {
  auto it = allowed.find(keypoint_id);
  if (it == allowed.end()) return true;
  return std::find(it->second.begin(), it->second.end(), part) !=
         it->second.end();
}

KeypointPartTable load_part_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open part table " + path);
  const json j = json::parse(in);
  KeypointPartTable t;
  for (const auto& e : j.at("entries")) {
    t.allowed[e.at("keypoint").get<int>()] =
        e.at("parts").get<std::vector<int>>();
  }
  return t;
}

void save_part_table(const std::string& path, const KeypointPartTable& table) {
  json entries = json::array();
  for (const auto& [id, parts] : table.allowed) {
    entries.push_back({{"keypoint", id}, {"parts", parts}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write part table " + path);
  out << json{{"entries", entries}}.dump(2);
}

namespace {

// One refinement pass; returns whether any pixel changed.
bool refine_pass(IUVMap& map, const std::vector<std::pair<int, Eigen::Vector2d>>& kps,
                 const KeypointPartTable& table) {
  bool changed = false;
  for (const auto& [id, pos] : kps) {
    const int cx = static_cast<int>(std::lround(pos.x()));
    const int cy = static_cast<int>(std::lround(pos.y()));

    // Majority non-background part in the 3x3 poll; ties by smaller part id.
    std::map<int, int> counts;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = cx + dx, y = cy + dy;
        if (!map.in_frame(x, y)) continue;
        const int p = map.part(x, y);
        if (p != 0) ++counts[p];
      }
    }
    if (counts.empty()) continue;
    int majority = 0, best = 0;
    for (const auto& [p, n] : counts) {
      if (n > best) {
        best = n;
        majority = p;
      }
    }
    if (table.consistent(id, majority)) continue;

    // Flood the offending part id to background through chained 3x3
    // neighborhoods, seeded at the keypoint.
    std::vector<std::uint8_t> visited(
        static_cast<std::size_t>(map.width) * map.height, 0);
    std::deque<std::pair<int, int>> queue;
    queue.emplace_back(cx, cy);
    visited[static_cast<std::size_t>(cy) * map.width + cx] = 1;
    if (map.part(cx, cy) == majority) {
      map.clear_pixel(cx, cy);
      changed = true;
    }
    while (!queue.empty()) {
      const auto [px, py] = queue.front();
      queue.pop_front();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = px + dx, y = py + dy;
          if (!map.in_frame(x, y)) continue;
          auto& seen = visited[static_cast<std::size_t>(y) * map.width + x];
          if (seen || map.part(x, y) != majority) continue;
          seen = 1;
          map.clear_pixel(x, y);
          changed = true;
          queue.emplace_back(x, y);
        }
      }
    }
  }
  return changed;
}

}  // namespace

IUVMap refine_iuv(const IUVMap& map, const SparseKeypointSet& keypoints,
                  const KeypointPartTable& table) {
  std::vector<std::pair<int, Eigen::Vector2d>> kps;
  for (int j = 0; j < keypoints.size(); ++j) {
    if (!keypoints.visibility[j]) continue;
    const Eigen::Vector2d pos = keypoints.positions.row(j);
    const int cx = static_cast<int>(std::lround(pos.x()));
    const int cy = static_cast<int>(std::lround(pos.y()));
    if (!map.in_frame(cx, cy)) {
      throw std::runtime_error("keypoint " + std::to_string(keypoints.ids[j]) +
                               " outside frame");
    }
    kps.emplace_back(keypoints.ids[j], pos);
  }
  std::stable_sort(kps.begin(), kps.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  IUVMap out = map;
  while (refine_pass(out, kps, table)) {
  }
  return out;
}

std::vector<DenseKeypoint> sample_dense_keypoints(const IUVMap& map, int n,
                                                  std::uint64_t seed) {
  std::vector<int> fg;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      if (map.part(x, y) != 0) fg.push_back(y * map.width + x);
    }
  }
  const int count = static_cast<int>(fg.size());
  const int take = std::min(n, count);

  std::mt19937_64 rng(seed);
  for (int i = 0; i < take; ++i) {
    std::uniform_int_distribution<int> pick(i, count - 1);
    std::swap(fg[i], fg[pick(rng)]);
  }

  std::vector<DenseKeypoint> out;
  out.reserve(take);
  for (int i = 0; i < take; ++i) {
    const int x = fg[i] % map.width, y = fg[i] / map.width;
    out.push_back({static_cast<double>(x), static_cast<double>(y),
                   map.part(x, y), static_cast<double>(map.u(x, y)),
                   static_cast<double>(map.v(x, y))});
  }
  return out;
}

std::vector<DenseKeypoint> add_uv_noise(const std::vector<DenseKeypoint>& kps,
                                        double sigma, std::uint64_t seed) {
  if (sigma < 0) throw std::runtime_error("noise sigma must be non-negative");
  if (sigma == 0) return kps;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<DenseKeypoint> out = kps;
  for (auto& kp : out) {
    kp.u = std::clamp(kp.u + noise(rng), 0.0, 255.0);
    kp.v = std::clamp(kp.v + noise(rng), 0.0, 255.0);
  }
  return out;
}

std::vector<DenseKeypoint> dropout_keypoints(const std::vector<DenseKeypoint>& kps,
                                             double keep_fraction,
                                             std::uint64_t seed) {
  if (keep_fraction < 0 || keep_fraction > 1) {
    throw std::runtime_error("keep_fraction must lie in [0,1]");
  }
  const int count = static_cast<int>(kps.size());
  const int keep = static_cast<int>(std::lround(keep_fraction * count));
  if (keep >= count) return kps;

  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < keep; ++i) {
    std::uniform_int_distribution<int> pick(i, count - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());

  std::vector<DenseKeypoint> out;
  out.reserve(keep);
  for (int i : idx) out.push_back(kps[i]);
  return out;
}

}  // namespace bodyfit
