#pragma once

#include "ygraph/forcing.hpp"
#include "ygraph/graph.hpp"
#include "ygraph/vertex.hpp"

#include <array>
#include <string>
#include <vector>

namespace ygraph {

enum class Mode { Linear, Nonlinear };

/// Initial profile on one edge, in that edge's own coordinate.
/// kinds: zero, gaussian (amp exp(-((x - center)/width)^2)),
/// soliton (3c sech^2((sqrt(c)/2)(x - center)), c = speed), file (CSV x,value).
struct Profile {
    std::string kind = "zero";
    double amp = 1, center = 0, width = 1, speed = 4;
    std::string file;
    /// Samples loaded from file, sorted by x.
    std::vector<std::array<double, 2>> table;

    double operator()(double x) const;

    static Profile gaussian(double amp, double center, double width);
    static Profile soliton(double speed, double center);
};

struct ScenarioConfig {
    double L = 50, h = 0.05, dt = 1e-3, T = 1;
    VertexCoupling coupling;
    Mode mode = Mode::Linear;
    /// u on [-L, 0], v and w on [0, L].
    std::array<Profile, 3> initial;
    double sponge_fraction = 0, sponge_strength = 0;
    /// Keep every k-th state (the final state is always kept).
    std::size_t snapshot_every = 1;

    /// Throws ContractError listing every violated invariant.
    void validate() const;
    std::size_t steps() const;
    std::size_t nodes() const; // per edge
};

/// Initial data sampled on the three edge grids.
GraphState initial_state(const ScenarioConfig& cfg);

/// Crank-Nicolson for d_x^3 with the vertex relations, outer-end conditions
/// and optional sponge imposed through Lagrange multipliers; AB2 for
/// d_x(u^2/2) in nonlinear mode. Mass is the discrete norm H of the scheme.
Trajectory evolve(const ScenarioConfig& cfg);

/// Same scheme from a given state (grids must match the config).
Trajectory evolve_from(const ScenarioConfig& cfg, const GraphState& start);

/// Discrete norm weights of one edge: h with h/2 at the second and
/// second-to-last node.
std::vector<double> edge_norm_weights(std::size_t n, double h);
double edge_mass(const GridFunction& f);

/// 3c sech^2((sqrt(c)/2)(x - c t - x0)).
GridFunction soliton_exact(double c, double x0, double t, const GridLayout& grid);

/// Whole-line scheme on [origin, right]: Dirichlet at the left end, Dirichlet
/// and Neumann at the right end. Returns the state at T.
GridFunction single_line_evolve(const GridFunction& u0, double dt, double T, Mode mode);

struct EnergyReport {
    std::vector<double> t;
    std::vector<double> mass;        // total mass
    std::vector<double> mass_change; // mass(t) - mass(0)
    std::vector<double> flux;        // vertex flux per record
    std::vector<double> flux_integral;
    double max_mismatch = 0;         // max |mass_change - flux_integral| / mass(0)
    double max_increase = 0;         // max (mass_{n+1} - mass_n) / mass(0)
    double max_flux = 0;
    bool nonlinear_warning = false;
};

/// Trapezoid accumulation of the trace flux against the mass change.
EnergyReport energy_report(const Trajectory& traj);

struct ScalingReport {
    double lam = 1;
    std::array<double, 3> discrepancy{}; // L2 error per edge over the L2 norm of the graph
    double max_discrepancy = 0;
};

/// Runs the scenario with data lam^{-2} u0(x / lam) on edges of length lam L,
/// spacing lam h / refine, step lam^3 dt / refine to time lam^3 T, then
/// compares lam^2 u~(lam x) with the base run at T. With refine = 1 both runs
/// see the same discrete problem up to scaling.
ScalingReport scaling_check(const ScenarioConfig& cfg, double lam, int refine = 1);

} // namespace ygraph
