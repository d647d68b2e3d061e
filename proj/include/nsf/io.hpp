// File formats: self-describing binary snapshots (bit-exact resume), the
// delimited diagnostics time series, and the run summary.
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsf/diagnostics.hpp"
#include "nsf/solver.hpp"

namespace nsf::app {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SnapshotHeader {
    std::uint32_t version = 1;
    std::uint32_t endian_tag = 0x01020304u;
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double time = 0.0;
    std::uint64_t step = 0;
    std::uint64_t floors_cum = 0;
    std::uint64_t physics_hash = 0;
    char field_order[32] = "rho,mom_x,mom_y,rho_e";
};

namespace detail {
inline const char kSnapshotMagic[8] = {'N', 'S', 'F', '2', 'S', 'N', 'A', 'P'};

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void take(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoError("snapshot: truncated file");
}
inline void put_field(std::ofstream& os, const Field& f) {
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) put(os, f(i, j));
}
inline void take_field(std::ifstream& is, Field& f) {
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i < f.nx(); ++i) take(is, f(i, j));
}
}  // namespace detail

inline void write_snapshot(const std::string& path, const solver::FluidState& s,
                           const Grid& grid, std::uint64_t step, std::uint64_t floors_cum,
                           std::uint64_t physics_hash) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("snapshot: cannot open '" + path + "' for writing");
    os.write(detail::kSnapshotMagic, sizeof(detail::kSnapshotMagic));
    SnapshotHeader h;
    h.nx = (std::uint32_t)grid.nx;
    h.ny = (std::uint32_t)grid.ny;
    h.dx = grid.dx;
    h.dy = grid.dy;
    h.time = s.t;
    h.step = step;
    h.floors_cum = floors_cum;
    h.physics_hash = physics_hash;
    detail::put(os, h);
    detail::put_field(os, s.rho);
    detail::put_field(os, s.mom_x);
    detail::put_field(os, s.mom_y);
    detail::put_field(os, s.rho_e);
    if (!os) throw IoError("snapshot: write failed for '" + path + "'");
}

struct Snapshot {
    SnapshotHeader header;
    solver::FluidState state;
};

inline Snapshot read_snapshot(const std::string& path, const Grid& grid) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("snapshot: cannot open '" + path + "'");
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, detail::kSnapshotMagic, 8) != 0)
        throw IoError("snapshot: bad magic in '" + path + "'");
    Snapshot snap;
    detail::take(is, snap.header);
    if (snap.header.endian_tag != 0x01020304u)
        throw IoError("snapshot: endianness mismatch");
    if ((int)snap.header.nx != grid.nx || (int)snap.header.ny != grid.ny)
        throw IoError("snapshot: grid mismatch (file " + std::to_string(snap.header.nx) + "x" +
                      std::to_string(snap.header.ny) + ", spec " + std::to_string(grid.nx) + "x" +
                      std::to_string(grid.ny) + ")");
    snap.state = solver::FluidState(grid);
    detail::take_field(is, snap.state.rho);
    detail::take_field(is, snap.state.mom_x);
    detail::take_field(is, snap.state.mom_y);
    detail::take_field(is, snap.state.rho_e);
    snap.state.t = snap.header.time;
    return snap;
}

// --- diagnostics series ------------------------------------------------------

inline const char* series_header() {
    return "step,t,mass,kinetic,internal,total,entropy_total,ballistic,"
           "entropy_production,ballistic_dissipation,flux_in_bracket,flux_out_bracket,"
           "rhs_convective,rhs_force,rhs_theta,lyapunov,min_rho,max_rho,min_theta,max_theta,"
           "min_sigma,floors_cum,influx_interval,outflux_interval";
}

inline std::string series_line(const diag::DiagnosticsRecord& r) {
    char buf[1024];
    std::snprintf(buf, sizeof(buf),
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%ld,%.17g,%.17g",
                  r.step, r.t, r.mass, r.kinetic, r.internal, r.total, r.entropy_total,
                  r.ballistic, r.entropy_production, r.ballistic_dissipation, r.flux_in_bracket,
                  r.flux_out_bracket, r.rhs_convective, r.rhs_force, r.rhs_theta, r.lyapunov,
                  r.min_rho, r.max_rho, r.min_theta, r.max_theta, r.min_sigma, r.floors_cum,
                  r.influx_interval, r.outflux_interval);
    return buf;
}

class SeriesWriter {
  public:
    SeriesWriter() = default;
    explicit SeriesWriter(const std::string& path) : os_(path, std::ios::trunc) {
        if (!os_) throw IoError("series: cannot open '" + path + "'");
        os_ << series_header() << "\n";
    }
    void append(const diag::DiagnosticsRecord& r) { os_ << series_line(r) << "\n"; }
    void flush() { os_.flush(); }

  private:
    std::ofstream os_;
};

}  // namespace nsf::app
