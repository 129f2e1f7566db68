#pragma once

#include "ygraph/graph.hpp"

#include <complex>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ygraph {

/// Reads a two-column CSV with header x,value; rows sorted by x on return.
std::vector<std::array<double, 2>> read_profile_csv(const std::filesystem::path& path);

/// Uniformly sampled column with header "<axis>,value" or "<axis>,re,im".
struct SampledCsv {
    double start = 0, step = 0;
    std::vector<std::complex<double>> values;
    bool complex = false;
};

SampledCsv read_sampled_csv(const std::filesystem::path& path, const std::string& axis);
void write_sampled_csv(const std::filesystem::path& path, const std::string& axis, double start, double step,
                       std::span<const std::complex<double>> values, bool complex);

/// Shortest round-trip formatting, so equal runs give equal bytes.
std::string format_number(double x);

/// edge_u_t<stamp>.csv, edge_v_..., edge_w_... with header x,value; stamp is
/// the time with six decimals. Returns the paths written.
std::vector<std::filesystem::path> write_edge_snapshots(const std::filesystem::path& dir, const GraphState& s);

/// step,t,mass_u,mass_v,mass_w,u,u_x,u_xx,v,v_x,v_xx,w,w_x,w_xx,flux,residual
std::filesystem::path write_diagnostics(const std::filesystem::path& path, const Trajectory& traj);

struct RunManifest {
    std::string command;
    std::string config_echo;
    std::string version;
    std::vector<std::filesystem::path> outputs;
    std::map<std::string, double> metrics;
    double wall_seconds = 0;
};

/// JSON summary; the manifest file itself is appended to outputs.
void write_manifest(const std::filesystem::path& path, RunManifest& m);

} // namespace ygraph
