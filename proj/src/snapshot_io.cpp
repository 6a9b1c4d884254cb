#include "nullwave/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <cstdio>

#include "nullwave/errors.hpp"

namespace nullwave {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is, const std::string& path) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw InputError("snapshot: truncated header in " + path);
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const FieldSnapshot& snap) {
    const std::size_t cells = snap.grid.cells();
    if (snap.u.size() != snap.ut.size()) throw UsageError("snapshot: u/ut component mismatch");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw UsageError("snapshot: cannot open " + path + " for writing");
    os.write("WNL1", 4);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.u.size()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.grid.points_per_axis));
    put<double>(os, snap.grid.half_width);
    put<double>(os, snap.t);
    for (std::size_t c = 0; c < snap.u.size(); ++c) {
        if (snap.u[c].size() != cells || snap.ut[c].size() != cells) throw UsageError("snapshot: field size mismatch");
        os.write(reinterpret_cast<const char*>(snap.u[c].data()), static_cast<std::streamsize>(cells * sizeof(double)));
        os.write(reinterpret_cast<const char*>(snap.ut[c].data()), static_cast<std::streamsize>(cells * sizeof(double)));
    }
    if (!os) throw UsageError("snapshot: write failed for " + path);
}

FieldSnapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("snapshot: cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "WNL1", 4) != 0) throw InputError("snapshot: bad magic in " + path);
    FieldSnapshot snap;
    const auto N = get<std::uint32_t>(is, path);
    const auto n = get<std::uint32_t>(is, path);
    snap.grid.half_width = get<double>(is, path);
    snap.t = get<double>(is, path);
    if (N == 0 || N > 64 || n < 4 || n > 4096) throw InputError("snapshot: implausible sizes in " + path);
    snap.grid.points_per_axis = static_cast<int>(n);
    const std::size_t cells = snap.grid.cells();
    snap.u.assign(N, std::vector<double>(cells));
    snap.ut.assign(N, std::vector<double>(cells));
    for (std::size_t c = 0; c < N; ++c) {
        if (!is.read(reinterpret_cast<char*>(snap.u[c].data()), static_cast<std::streamsize>(cells * sizeof(double))) ||
            !is.read(reinterpret_cast<char*>(snap.ut[c].data()), static_cast<std::streamsize>(cells * sizeof(double)))) {
            throw InputError("snapshot: truncated field data in " + path);
        }
    }
    return snap;
}

std::string snapshot_file_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_%.6f.bin", t);
    return buf;
}

}  // namespace nullwave
