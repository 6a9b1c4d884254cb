#pragma once

// Binary snapshot layout, little-endian:
//   char[4]  magic "WNL1"
//   uint32   N (components)
//   uint32   n (points per axis)
//   float64  L (half width)
//   float64  t
//   then for each component: u (n^3 float64), ut (n^3 float64), x fastest.

#include <string>
#include <vector>

#include "nullwave/grid.hpp"

namespace nullwave {

struct FieldSnapshot {
    double t = 0.0;
    GridSpec grid;
    std::vector<std::vector<double>> u;   // interior values, x fastest
    std::vector<std::vector<double>> ut;

    std::size_t n_components() const noexcept { return u.size(); }
};

void write_snapshot(const std::string& path, const FieldSnapshot& snap);
/// Throws InputError on a bad magic, truncated file or inconsistent sizes.
FieldSnapshot read_snapshot(const std::string& path);

/// File name used by the CLI for a snapshot at time t, e.g. snapshot_40.000000.bin.
std::string snapshot_file_name(double t);

}  // namespace nullwave
