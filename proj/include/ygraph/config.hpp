#pragma once

#include "ygraph/errors.hpp"
#include "ygraph/graphsim.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ygraph {

/// Every problem found in a config file, one per entry, each prefixed with
/// its location ("scenario.cfg:12: ...").
class ConfigError : public ContractError {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Sectioned key = value text; '#' starts a comment.
///
///   [grid]     L, h
///   [time]     T, dt, mode (linear | nonlinear), snapshot_every
///   [coupling] type (type1 | type2), then either a2 a3 b2 b3 c2 c3 or the
///              special form alpha2 alpha3 beta2 beta3
///   [initial]  u, v, w = zero | gaussian | soliton | file, with
///              <edge>.amp, .center, .width, .speed, .file
///   [sponge]   fraction, strength
///
/// Missing keys keep the ScenarioConfig defaults. Profile files are CSV with
/// header x,value, relative to base_dir. The result has passed validate().
ScenarioConfig parse_config_text(std::string_view text, const std::string& name = "<config>",
                                 const std::filesystem::path& base_dir = {});
ScenarioConfig parse_config(const std::filesystem::path& path);

/// The resolved configuration in the same format (parses back to itself).
std::string config_text(const ScenarioConfig& cfg);

} // namespace ygraph
