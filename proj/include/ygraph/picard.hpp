#pragma once

#include "ygraph/graphsim.hpp"

#include <string>
#include <vector>

namespace ygraph {

/// Whole-line extension of an edge function: 6f(-x) - 8f(-2x) + 3f(-3x) on
/// the other side (C^2 across 0), times a smooth cutoff that is 1 up to
/// distance width from 0 and vanishes beyond 2 width. left says whether the
/// edge is [-L, 0] or [0, L]. The result lives on [-L, L] with the same spacing.
GridFunction hestenes_extend(const GridFunction& edge, bool left, double width = 0.5);

struct PicardOptions {
    /// Whole-line computational grid [-L, L] and gamma step.
    double L = 20, h = 0.1, dt = 0.005;
    LambdaVector lambda{0.05, 0.4, 0.05, 0.05, 0};
    /// Cutoff width of the reflected part of the extensions.
    double taper = 0.5;
    /// Stop once the distance between consecutive iterates falls below this.
    double tol = 1e-13;
    ForcingOptions forcing;
    GroupOptions group;
};

struct PicardResult {
    /// iterates[k] is iterate k + 1 (iterate 0 is zero); states at every gamma level.
    std::vector<Trajectory> iterates;
    /// distance[k] = sup |iterate k+1 - iterate k| over edges, nodes and levels.
    std::vector<double> distance;
    bool converged = false;
    bool diverged = false;

    /// distance[k] / distance[k-1], or 0 when the previous distance is 0.
    double ratio(std::size_t k) const;
    std::string history() const;
};

/// Iterates the map u -> V_-^{l1}g1 + V_-^{l2}g2 + F, with F the free
/// evolution of the extended data plus K(-d_x(u^2/2)) of the extended
/// iterate (nonlinear mode only), and gamma re-solved from M gamma = F each
/// time. Uses cfg.coupling, cfg.mode, cfg.initial and cfg.T; the grid comes
/// from opt. Stops early on convergence or when the distance grows twice in a
/// row (diverged). Small data: each extended datum must have
/// (int f^2 + f_x^2)^{1/2} <= 0.1.
PicardResult picard_iterate(const ScenarioConfig& cfg, std::size_t n_iter, const PicardOptions& opt = {});

/// Relative L2 distance of a from ref at the nodes of a. ref must have a node
/// at every node of a (same or finer spacing covering a's edges).
double state_distance(const GraphState& a, const GraphState& ref);

} // namespace ygraph
