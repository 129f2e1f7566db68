#include "ygraph/csvio.hpp"

#include "ygraph/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ygraph {

namespace {

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ContractError("cannot write " + p.string());
    return out;
}

} // namespace

std::string format_number(double x)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::vector<std::array<double, 2>> read_profile_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open profile file " + path.string());
    std::string line;
    std::getline(in, line);
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }), line.end());
    if (line != "x,value") throw ContractError(path.string() + ": expected header x,value");
    std::vector<std::array<double, 2>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::array<double, 2> row{};
        const auto comma = line.find(',');
        bool ok = comma != std::string::npos;
        if (ok) {
            auto parse = [](std::string s, double& out) {
                s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
                        s.end());
                const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
                return ec == std::errc() && p == s.data() + s.size() && !s.empty();
            };
            ok = parse(line.substr(0, comma), row[0]) && parse(line.substr(comma + 1), row[1]);
        }
        if (!ok) throw ContractError(path.string() + ":" + std::to_string(lineno) + ": expected two numbers");
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

SampledCsv read_sampled_csv(const std::filesystem::path& path, const std::string& axis)
{
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open " + path.string());
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }), s.end());
        return s;
    };
    std::string line;
    std::getline(in, line);
    line = strip(line);
    SampledCsv out;
    if (line == axis + ",re,im")
        out.complex = true;
    else if (line != axis + ",value")
        throw ContractError(path.string() + ":1: expected header " + axis + ",value or " + axis + ",re,im");
    const std::size_t cols = out.complex ? 3 : 2;
    std::vector<double> pos;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty()) continue;
        double v[3] = {0, 0, 0};
        std::size_t k = 0, b = 0;
        bool ok = true;
        while (ok && k < cols) {
            const auto e = std::min(line.find(',', b), line.size());
            const auto [p, ec] = std::from_chars(line.data() + b, line.data() + e, v[k]);
            ok = ec == std::errc() && p == line.data() + e && e > b;
            ++k;
            b = e + 1;
        }
        if (!ok || b <= line.size())
            throw ContractError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                                " numbers");
        pos.push_back(v[0]);
        out.values.emplace_back(v[1], v[2]);
    }
    if (pos.size() < 2) throw ContractError(path.string() + ": need two or more samples");
    out.start = pos[0];
    out.step = (pos.back() - pos[0]) / double(pos.size() - 1);
    if (!(out.step > 0)) throw ContractError(path.string() + ": " + axis + " must increase");
    for (std::size_t i = 0; i < pos.size(); ++i)
        if (std::abs(pos[i] - (out.start + out.step * double(i))) > 1e-6 * out.step)
            throw ContractError(path.string() + ":" + std::to_string(i + 2) + ": " + axis + " column is not uniform");
    return out;
}

void write_sampled_csv(const std::filesystem::path& path, const std::string& axis, double start, double step,
                       std::span<const std::complex<double>> values, bool complex)
{
    auto os = open_out(path);
    os << axis << (complex ? ",re,im\n" : ",value\n");
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << format_number(start + step * double(i)) << ',' << format_number(values[i].real());
        if (complex) os << ',' << format_number(values[i].imag());
        os << '\n';
    }
}

std::vector<std::filesystem::path> write_edge_snapshots(const std::filesystem::path& dir, const GraphState& s)
{
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%.6f", s.t);
    std::vector<std::filesystem::path> out;
    const std::array<std::pair<char, const GridFunction*>, 3> edges = {{{'u', &s.u}, {'v', &s.v}, {'w', &s.w}}};
    for (const auto& [name, f] : edges) {
        const auto p = dir / (std::string("edge_") + name + "_t" + stamp + ".csv");
        auto os = open_out(p);
        os << "x,value\n";
        for (std::size_t i = 0; i < f->size(); ++i) os << format_number(f->x(i)) << ',' << format_number(f->samples[i]) << '\n';
        out.push_back(p);
    }
    return out;
}

std::filesystem::path write_diagnostics(const std::filesystem::path& path, const Trajectory& traj)
{
    auto os = open_out(path);
    os << "step,t,mass_u,mass_v,mass_w,u,u_x,u_xx,v,v_x,v_xx,w,w_x,w_xx,flux,residual\n";
    for (const auto& r : traj.diagnostics) {
        os << r.step << ',' << format_number(r.t) << ',' << format_number(r.mass_u) << ',' << format_number(r.mass_v)
           << ',' << format_number(r.mass_w);
        for (const auto* tr : {&r.traces.u, &r.traces.v, &r.traces.w})
            for (double x : *tr) os << ',' << format_number(x);
        os << ',' << format_number(r.flux) << ',' << format_number(r.residual) << '\n';
    }
    return path;
}

void write_manifest(const std::filesystem::path& path, RunManifest& m)
{
    m.outputs.push_back(path);
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["config"] = m.config_echo;
    j["wall_seconds"] = m.wall_seconds;
    j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.metrics) j["metrics"][k] = v;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& p : m.outputs) j["outputs"].push_back(p.filename().string());
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

} // namespace ygraph
