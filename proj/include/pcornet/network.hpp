#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pcornet/glasso.hpp"

namespace pcornet {

/// Raw and z-scored centrality indices per node.
struct CentralityTable {
  std::vector<double> strength, closeness, betweenness;
  std::vector<double> z_strength, z_closeness, z_betweenness;
};

/// Node strength: sum of absolute edge weights at each node.
std::vector<double> strength(const PcorNetwork& net);

enum class ClosenessMode {
  ZeroIfUnreachable,   // any unreachable target makes closeness 0
  ComponentRestricted  // sum distances over reachable targets only
};

/// Closeness over weighted shortest paths with edge length 1/|w|.
std::vector<double> closeness(const PcorNetwork& net,
                              ClosenessMode mode = ClosenessMode::ZeroIfUnreachable);

/// Weighted shortest-path betweenness (Brandes accumulation over 1/|w|
/// lengths, equal-length paths split credit fractionally). Per-source
/// contributions are reduced in source order, so the result does not depend
/// on the worker count.
std::vector<double> betweenness(const PcorNetwork& net, int threads = 0);

/// Single-pass sequential Brandes, kept as the reference the parallel kernel
/// is checked against.
std::vector<double> betweenness_serial(const PcorNetwork& net);

/// (v - mean) / sample SD; an all-equal vector maps to all zeros.
std::vector<double> standardize(const std::vector<double>& values);

CentralityTable centrality_table(const PcorNetwork& net, int threads = 0);

struct Layout {
  std::vector<std::array<double, 2>> coords;  // normalized to [-1, 1]^2
  std::uint64_t seed = 0;
};

/// Weighted Fruchterman-Reingold layout, attraction scaled by |weight|.
/// Deterministic for a fixed seed.
Layout layout_fr(const PcorNetwork& net, std::uint64_t seed,
                 int iterations = 500);

/// Layout of the element-wise average of |weights| across networks; used to
/// draw several networks with a common node placement.
Layout average_layout(const std::vector<PcorNetwork>& nets, std::uint64_t seed,
                      int iterations = 500);

}  // namespace pcornet
