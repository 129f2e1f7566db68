#include "ygraph/graph.hpp"

#include "ygraph/errors.hpp"

#include <cmath>

namespace ygraph {

double l2_mass(const GridFunction& f)
{
    const std::size_t n = f.size();
    if (n < 2) return 0;
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += w * f.samples[i] * f.samples[i];
    }
    return acc * f.spacing;
}

VertexTraces one_sided_traces(const GraphState& s)
{
    VertexTraces tr;
    for (int j = 0; j < 3; ++j) {
        tr.u[j] = trace_at_zero(s.u, j, Side::Left);
        tr.v[j] = trace_at_zero(s.v, j, Side::Right);
        tr.w[j] = trace_at_zero(s.w, j, Side::Right);
    }
    return tr;
}

double energy_flux(const VertexTraces& tr)
{
    const double grad = tr.u[1] * tr.u[1] - tr.v[1] * tr.v[1] - tr.w[1] * tr.w[1];
    const double curv = tr.u[0] * tr.u[2] - tr.v[0] * tr.v[2] - tr.w[0] * tr.w[2];
    return grad - 2.0 * curv;
}

namespace {
std::size_t zero_node(const GridFunction& f, const char* who)
{
    if (f.size() < 2 || !(f.spacing > 0)) throw ContractError(std::string(who) + ": empty grid");
    const double k = -f.origin / f.spacing;
    const double r = std::round(k);
    if (r < 0 || r >= double(f.size()) || std::fabs(k - r) > 1e-9)
        throw DomainError(std::string(who) + ": grid has no node at x = 0");
    return std::size_t(r);
}
} // namespace

GridFunction restrict_left(const GridFunction& f)
{
    const std::size_t k = zero_node(f, "restrict_left");
    return {f.origin, f.spacing, std::vector<double>(f.samples.begin(), f.samples.begin() + long(k) + 1)};
}

GridFunction restrict_right(const GridFunction& f)
{
    const std::size_t k = zero_node(f, "restrict_right");
    return {0.0, f.spacing, std::vector<double>(f.samples.begin() + long(k), f.samples.end())};
}

} // namespace ygraph
