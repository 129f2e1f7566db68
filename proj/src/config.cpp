#include "ygraph/config.hpp"

#include "ygraph/csvio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ygraph {

ConfigError::ConfigError(std::vector<std::string> problems)
    : ContractError([&] {
          std::string m = "invalid config:";
          for (const auto& p : problems) m += "\n  " + p;
          return m;
      }()),
      problems_(std::move(problems))
{
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string value;
    std::size_t line;
};

const std::map<std::string, std::vector<std::string>> known_keys = {
    {"grid", {"L", "h"}},
    {"time", {"T", "dt", "mode", "snapshot_every"}},
    {"coupling", {"type", "a2", "a3", "b2", "b3", "c2", "c3", "alpha2", "alpha3", "beta2", "beta3"}},
    {"initial", {"u", "v", "w", "u.amp", "u.center", "u.width", "u.speed", "u.file", "v.amp", "v.center", "v.width",
                 "v.speed", "v.file", "w.amp", "w.center", "w.width", "w.speed", "w.file"}},
    {"sponge", {"fraction", "strength"}},
};

class Reader {
public:
    Reader(std::string name) : name_(std::move(name)) {}

    void parse(std::string_view text)
    {
        std::string section;
        std::size_t lineno = 0;
        std::istringstream in{std::string(text)};
        std::string raw;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = trim(raw.substr(0, raw.find('#')));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error(lineno, "malformed section header '" + line + "'");
                    continue;
                }
                section = trim(std::string_view(line).substr(1, line.size() - 2));
                if (!known_keys.count(section)) error(lineno, "unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                error(lineno, "expected key = value, got '" + line + "'");
                continue;
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (section.empty()) {
                error(lineno, "key '" + key + "' outside any section");
                continue;
            }
            const auto ks = known_keys.find(section);
            if (ks == known_keys.end()) continue; // already reported
            if (std::find(ks->second.begin(), ks->second.end(), key) == ks->second.end()) {
                error(lineno, "unknown key '" + key + "' in [" + section + "]");
                continue;
            }
            const std::string full = section + "." + key;
            if (auto it = entries_.find(full); it != entries_.end()) {
                error(lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
                continue;
            }
            entries_[full] = {value, lineno};
        }
    }

    bool has(const std::string& k) const { return entries_.count(k) != 0; }

    void number(const std::string& k, double& out)
    {
        auto it = entries_.find(k);
        if (it == entries_.end()) return;
        const std::string& v = it->second.value;
        double x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty())
            error(it->second.line, key_of(k) + ": expected a number, got '" + v + "'");
        else
            out = x;
    }

    void count(const std::string& k, std::size_t& out)
    {
        auto it = entries_.find(k);
        if (it == entries_.end()) return;
        const std::string& v = it->second.value;
        std::size_t x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty())
            error(it->second.line, key_of(k) + ": expected a non-negative integer, got '" + v + "'");
        else
            out = x;
    }

    template <class T>
    void choice(const std::string& k, const std::map<std::string, T>& options, T& out)
    {
        auto it = entries_.find(k);
        if (it == entries_.end()) return;
        auto o = options.find(it->second.value);
        if (o == options.end()) {
            std::string list;
            for (const auto& [name, _] : options) list += (list.empty() ? "" : " | ") + name;
            error(it->second.line, key_of(k) + ": expected " + list + ", got '" + it->second.value + "'");
        } else {
            out = o->second;
        }
    }

    std::string text(const std::string& k) const
    {
        auto it = entries_.find(k);
        return it == entries_.end() ? std::string() : it->second.value;
    }

    std::string where(const std::string& k) const
    {
        auto it = entries_.find(k);
        return it == entries_.end() ? name_ : name_ + ":" + std::to_string(it->second.line);
    }

    void error(std::size_t line, const std::string& msg) { problems.push_back(name_ + ":" + std::to_string(line) + ": " + msg); }
    void error_at(const std::string& k, const std::string& msg) { problems.push_back(where(k) + ": " + msg); }

    std::vector<std::string> problems;

private:
    static std::string key_of(const std::string& full) { return full.substr(full.find('.') + 1); }

    std::string name_;
    std::map<std::string, Entry> entries_;
};

// Key whose line best locates a validation message.
std::string key_for(const std::string& msg)
{
    static const std::vector<std::pair<std::string, std::string>> prefixes = {
        {"L ", "grid.L"},
        {"h ", "grid.h"},
        {"dt ", "time.dt"},
        {"T ", "time.T"},
        {"snapshot_every", "time.snapshot_every"},
        {"sponge_fraction", "sponge.fraction"},
        {"sponge_strength", "sponge.strength"},
        {"initial data", "initial.u"},
    };
    for (const auto& [p, k] : prefixes)
        if (msg.rfind(p, 0) == 0) return k;
    return "coupling.type";
}

} // namespace

ScenarioConfig parse_config_text(std::string_view text, const std::string& name, const std::filesystem::path& base_dir)
{
    Reader r(name);
    r.parse(text);
    ScenarioConfig cfg;

    r.number("grid.L", cfg.L);
    r.number("grid.h", cfg.h);
    r.number("time.T", cfg.T);
    r.number("time.dt", cfg.dt);
    r.choice<Mode>("time.mode", {{"linear", Mode::Linear}, {"nonlinear", Mode::Nonlinear}}, cfg.mode);
    r.count("time.snapshot_every", cfg.snapshot_every);
    r.number("sponge.fraction", cfg.sponge_fraction);
    r.number("sponge.strength", cfg.sponge_strength);

    CouplingKind kind = CouplingKind::Type1;
    r.choice<CouplingKind>("coupling.type", {{"type1", CouplingKind::Type1}, {"type2", CouplingKind::Type2}}, kind);
    const bool special = r.has("coupling.alpha2") || r.has("coupling.alpha3") || r.has("coupling.beta2") ||
                         r.has("coupling.beta3");
    const bool raw = r.has("coupling.a2") || r.has("coupling.a3") || r.has("coupling.b2") || r.has("coupling.b3") ||
                     r.has("coupling.c2") || r.has("coupling.c3");
    if (special && raw) {
        r.error_at(r.has("coupling.alpha2") ? "coupling.alpha2" : "coupling.alpha3",
                   "give either a2 .. c3 or alpha2 .. beta3, not both");
    } else if (special) {
        double a2 = 1, a3 = 1, b2 = 0, b3 = 0;
        r.number("coupling.alpha2", a2);
        r.number("coupling.alpha3", a3);
        r.number("coupling.beta2", b2);
        r.number("coupling.beta3", b3);
        if (a2 == 0 || a3 == 0)
            r.error_at(a2 == 0 ? "coupling.alpha2" : "coupling.alpha3", "alpha2 and alpha3 must be nonzero");
        else
            cfg.coupling = VertexCoupling::special(kind, a2, a3, b2, b3);
    } else {
        cfg.coupling.kind = kind;
        r.number("coupling.a2", cfg.coupling.a2);
        r.number("coupling.a3", cfg.coupling.a3);
        r.number("coupling.b2", cfg.coupling.b2);
        r.number("coupling.b3", cfg.coupling.b3);
        r.number("coupling.c2", cfg.coupling.c2);
        r.number("coupling.c3", cfg.coupling.c3);
    }

    const std::map<std::string, std::string> kinds = {
        {"zero", "zero"}, {"gaussian", "gaussian"}, {"soliton", "soliton"}, {"file", "file"}};
    for (int e = 0; e < 3; ++e) {
        const std::string edge = std::string("initial.") + "uvw"[e];
        Profile& p = cfg.initial[e];
        r.choice<std::string>(edge, kinds, p.kind);
        r.number(edge + ".amp", p.amp);
        r.number(edge + ".center", p.center);
        r.number(edge + ".width", p.width);
        r.number(edge + ".speed", p.speed);
        p.file = r.text(edge + ".file");
        if (p.kind == "file") {
            if (p.file.empty()) {
                r.error_at(edge, "profile 'file' needs " + edge.substr(8) + ".file");
                continue;
            }
            std::filesystem::path path = p.file;
            if (path.is_relative()) path = base_dir / path;
            try {
                p.table = read_profile_csv(path);
            } catch (const std::exception& ex) {
                r.error_at(edge + ".file", ex.what());
            }
        }
    }

    if (r.problems.empty()) {
        try {
            cfg.validate();
        } catch (const ContractError& ex) {
            std::istringstream lines(ex.what());
            std::string line;
            std::getline(lines, line); // "invalid scenario:"
            while (std::getline(lines, line)) {
                const std::string msg = trim(line);
                if (!msg.empty()) r.error_at(key_for(msg), msg);
            }
        }
    }
    if (!r.problems.empty()) throw ConfigError(r.problems);
    return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string(), path.parent_path());
}

std::string config_text(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    auto num = [](double x) { return format_number(x); };
    const auto& c = cfg.coupling;
    os << "[grid]\nL = " << num(cfg.L) << "\nh = " << num(cfg.h) << "\n\n";
    os << "[time]\nT = " << num(cfg.T) << "\ndt = " << num(cfg.dt)
       << "\nmode = " << (cfg.mode == Mode::Linear ? "linear" : "nonlinear") << "\nsnapshot_every = " << cfg.snapshot_every
       << "\n\n";
    os << "[coupling]\ntype = " << to_string(c.kind) << "\na2 = " << num(c.a2) << "\na3 = " << num(c.a3)
       << "\nb2 = " << num(c.b2) << "\nb3 = " << num(c.b3) << "\nc2 = " << num(c.c2) << "\nc3 = " << num(c.c3) << "\n\n";
    os << "[initial]\n";
    for (int e = 0; e < 3; ++e) {
        const char n = "uvw"[e];
        const Profile& p = cfg.initial[e];
        os << n << " = " << p.kind << "\n";
        if (p.kind == "gaussian")
            os << n << ".amp = " << num(p.amp) << "\n" << n << ".center = " << num(p.center) << "\n" << n
               << ".width = " << num(p.width) << "\n";
        if (p.kind == "soliton") os << n << ".speed = " << num(p.speed) << "\n" << n << ".center = " << num(p.center) << "\n";
        if (p.kind == "file") os << n << ".file = " << p.file << "\n";
    }
    os << "\n[sponge]\nfraction = " << num(cfg.sponge_fraction) << "\nstrength = " << num(cfg.sponge_strength) << "\n";
    return os.str();
}

} // namespace ygraph
