#pragma once

#include "bodyfit/keypoints.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bodyfit {

// Dense-correspondence raster: per pixel (I, U, V) with I = 0 background.
struct IUVMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // height*width*3 row-major

  IUVMap() = default;
  IUVMap(int w, int h)
      : width(w), height(h),
        data(static_cast<std::size_t>(w) * h * 3, 0) {}

  bool in_frame(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  std::uint8_t part(int x, int y) const { return data[idx(x, y)]; }
  std::uint8_t u(int x, int y) const { return data[idx(x, y) + 1]; }
  std::uint8_t v(int x, int y) const { return data[idx(x, y) + 2]; }
  void set(int x, int y, std::uint8_t part, std::uint8_t u, std::uint8_t v) {
    const std::size_t i = idx(x, y);
    data[i] = part;
    data[i + 1] = u;
    data[i + 2] = v;
  }
  void clear_pixel(int x, int y) { set(x, y, 0, 0, 0); }
  int foreground_count() const;

 private:
  std::size_t idx(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

// Binary raster format: magic "IUVR", u32le width, u32le height, then
// height*width*3 bytes (I,U,V) row-major.
IUVMap read_iuv(const std::string& path);
void write_iuv(const std::string& path, const IUVMap& map);

// Sparse-keypoint id -> part ids consistent with it.
struct KeypointPartTable {
  std::map<int, std::vector<int>> allowed;

  // Unknown keypoint ids cannot be judged and count as consistent.
  bool consistent(int keypoint_id, int part) const;
};

KeypointPartTable load_part_table(const std::string& path);
void save_part_table(const std::string& path, const KeypointPartTable& table);

// Removes IUV regions that contradict the sparse keypoints: polls the 3x3
// grid around each visible keypoint, takes the majority non-background part,
// and if the table rejects it flood-fills that part id to background through
// chained 3x3 neighborhoods. Keypoints are processed in ascending id order
// and passes repeat until a fixpoint, which makes the operation idempotent.
IUVMap refine_iuv(const IUVMap& map, const SparseKeypointSet& keypoints,
                  const KeypointPartTable& table);

// Uniform sample without replacement over foreground pixels; returns all of
// them if fewer than n.
std::vector<DenseKeypoint> sample_dense_keypoints(const IUVMap& map, int n,
                                                  std::uint64_t seed);

// Independent zero-mean Gaussian noise on U and V, clamped to [0,255].
std::vector<DenseKeypoint> add_uv_noise(const std::vector<DenseKeypoint>& kps,
                                        double sigma, std::uint64_t seed);

// Keeps round(keep_fraction * |kps|) keypoints, chosen uniformly without
// replacement, input order preserved.
std::vector<DenseKeypoint> dropout_keypoints(const std::vector<DenseKeypoint>& kps,
                                             double keep_fraction,
                                             std::uint64_t seed);

}  // namespace bodyfit
