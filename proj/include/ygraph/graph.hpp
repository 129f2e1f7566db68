#pragma once

#include "ygraph/linops.hpp"

#include <array>
#include <vector>

namespace ygraph {

/// Fields on the three edges at one time. u lives on [-L, 0], v and w on
/// [0, L]; each grid ends exactly at the vertex node.
struct GraphState {
    double t = 0;
    GridFunction u, v, w;
};

/// One-sided vertex traces (value, first and second derivative) per edge.
struct VertexTraces {
    std::array<double, 3> u{}, v{}, w{};
};

struct StepRecord {
    std::size_t step = 0;
    double t = 0;
    double mass_u = 0, mass_v = 0, mass_w = 0;
    VertexTraces traces;
    /// d/dt of the total mass predicted by the vertex traces.
    double flux = 0;
    /// Largest coupling-relation residual at this step.
    double residual = 0;
};

/// States may be a subsample of the steps; diagnostics cover every step and
/// each state has the record with the same time.
struct Trajectory {
    std::vector<GraphState> states;
    std::vector<StepRecord> diagnostics;
    bool nonlinear = false;
};

/// Trapezoid integral of f^2.
double l2_mass(const GridFunction& f);

/// Traces from 4-node (plus derivative order) one-sided stencils ending at 0.
VertexTraces one_sided_traces(const GraphState& s);

/// u_x^2 - v_x^2 - w_x^2 - 2 (u u_xx - v v_xx - w w_xx) at the vertex: the rate
/// of change of the total mass for the linear flow.
double energy_flux(const VertexTraces& tr);

/// Restriction of a whole-line grid function to x <= 0 or x >= 0. The grid must
/// have a node at 0.
GridFunction restrict_left(const GridFunction& f);
GridFunction restrict_right(const GridFunction& f);

} // namespace ygraph
