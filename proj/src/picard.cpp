#include "ygraph/picard.hpp"

#include "ygraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ygraph {

namespace {

double smooth_step(double t)
{
    auto f = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
    return f(t) / (f(t) + f(1 - t));
}

// 1 on [0, 1], 0 beyond 2.
double taper(double r) { return r <= 1 ? 1.0 : r >= 2 ? 0.0 : smooth_step(2 - r); }

// (int f^2 + f_x^2)^{1/2}.
double h1_norm(const GridFunction& f, const GroupOptions& g)
{
    GridFunction d = spectral_derivative(f, 1, g);
    for (std::size_t i = 0; i < d.size(); ++i) d.samples[i] = std::hypot(d.samples[i], f.samples[i]);
    return std::sqrt(l2_mass(d));
}

GridFunction edge_of(const GraphState& s, int e) { return e == 0 ? s.u : e == 1 ? s.v : s.w; }

double sup_distance(const Trajectory& a, const Trajectory* b)
{
    double d = 0;
    for (std::size_t n = 0; n < a.states.size(); ++n)
        for (int e = 0; e < 3; ++e) {
            const auto& x = edge_of(a.states[n], e).samples;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double y = b ? edge_of(b->states[n], e).samples[i] : 0.0;
                d = std::max(d, std::fabs(x[i] - y));
            }
        }
    return d;
}

} // namespace

GridFunction hestenes_extend(const GridFunction& edge, bool left, double width)
{
    if (!(width > 0)) throw DomainError("hestenes_extend: taper width must be positive");
    const std::size_t n = edge.size();
    if (n < 4) throw DomainError("hestenes_extend: edge needs at least 4 nodes");
    const double h = edge.spacing;
    const double L = h * double(n - 1);
    // Sample at distance k from the vertex, inside the edge.
    auto at = [&](std::size_t k) { return k >= n ? 0.0 : left ? edge.samples[n - 1 - k] : edge.samples[k]; };

    GridFunction out{-L, h, std::vector<double>(2 * n - 1)};
    for (std::size_t k = 0; k < n; ++k) {
        const double own = at(k);
        const double mirror = (6 * at(k) - 8 * at(2 * k) + 3 * at(3 * k)) * taper(h * double(k) / width);
        if (left) {
            out.samples[n - 1 - k] = own;
            if (k > 0) out.samples[n - 1 + k] = mirror;
        } else {
            out.samples[n - 1 + k] = own;
            if (k > 0) out.samples[n - 1 - k] = mirror;
        }
    }
    return out;
}

double PicardResult::ratio(std::size_t k) const
{
    if (k == 0 || k >= distance.size() || distance[k - 1] == 0) return 0;
    return distance[k] / distance[k - 1];
}

std::string PicardResult::history() const
{
    std::ostringstream os;
    os.precision(4);
    for (std::size_t k = 0; k < distance.size(); ++k) {
        os << "iterate " << k + 1 << ": distance " << distance[k];
        if (k > 0 && distance[k - 1] > 0) os << ", ratio " << ratio(k);
        os << '\n';
    }
    if (converged) os << "converged\n";
    if (diverged) os << "diverged\n";
    return os.str();
}

PicardResult picard_iterate(const ScenarioConfig& cfg, std::size_t n_iter, const PicardOptions& opt)
{
    if (n_iter < 1 || n_iter > 10) throw DomainError("picard_iterate: n_iter must lie in [1, 10]");
    if (!(cfg.T > 0 && cfg.T <= 0.5 + 1e-12)) throw DomainError("picard_iterate: T must lie in (0, 0.5]");
    if (!(opt.h > 0 && opt.dt > 0 && opt.L >= 20 * opt.h))
        throw DomainError("picard_iterate: need h, dt > 0 and L >= 20 h");
    const double r = opt.L / opt.h;
    if (std::fabs(r - std::round(r)) > 1e-9 * r) throw DomainError("picard_iterate: L must be a multiple of h");
    const std::size_t n = std::size_t(std::llround(r)) + 1;
    const std::size_t steps = std::size_t(std::llround(cfg.T / opt.dt));
    if (steps < 2) throw DomainError("picard_iterate: T must span at least two steps");

    ScenarioConfig grid = cfg;
    grid.L = opt.L;
    grid.h = opt.h;
    grid.dt = std::min(cfg.dt, opt.h);
    const GraphState s0 = initial_state(grid);

    std::array<SpaceTimeField, 3> free;
    for (int e = 0; e < 3; ++e) {
        const GridFunction ext = hestenes_extend(edge_of(s0, e), e == 0, opt.taper);
        const double norm = h1_norm(ext, opt.group);
        if (norm > 0.1) {
            std::ostringstream os;
            os << "picard_iterate: extended datum on edge " << "uvw"[e] << " has H^1 norm " << norm
               << ", above the small-data bound 0.1";
            throw DomainError(os.str());
        }
        free[e] = free_evolution(ext, opt.dt, steps + 1, opt.group);
    }

    AssemblyOptions aopt;
    aopt.dt = opt.dt;
    aopt.stride = 1;
    aopt.forcing = opt.forcing;
    aopt.group = opt.group;

    // The boundary-forcing fields radiate small Airy tails to the ends of the
    // grid; the nonlinear source is cut off there so K sees decaying data.
    std::vector<double> window(2 * n - 1);
    for (std::size_t i = 0; i < window.size(); ++i) {
        const double r = std::fabs(-opt.L + opt.h * double(i)) / opt.L;
        window[i] = r <= 0.8 ? 1.0 : r >= 0.95 ? 0.0 : smooth_step((0.95 - r) / 0.15);
    }

    PicardResult res;
    const bool nonlinear = cfg.mode == Mode::Nonlinear;
    for (std::size_t k = 0; k < n_iter; ++k) {
        std::array<SpaceTimeField, 3> F = free;
        if (nonlinear && !res.iterates.empty()) {
            const Trajectory& prev = res.iterates.back();
            for (int e = 0; e < 3; ++e) {
                SpaceTimeField w{-opt.L, opt.h, opt.dt, std::vector<std::vector<double>>(steps + 1)};
                for (std::size_t j = 0; j <= steps; ++j) {
                    GridFunction sq = hestenes_extend(edge_of(prev.states[j], e), e == 0, opt.taper);
                    for (double& x : sq.samples) x = -0.5 * x * x;
                    w.levels[j] = spectral_derivative(sq, 1, opt.group).samples;
                    for (std::size_t i = 0; i < 2 * n - 1; ++i) w.levels[j][i] *= window[i];
                }
                const SpaceTimeField K = duhamel_inhomog_all(w, opt.group);
                for (std::size_t j = 0; j <= steps; ++j)
                    for (std::size_t i = 0; i < 2 * n - 1; ++i) F[e].levels[j][i] += K.levels[j][i];
            }
        }
        Trajectory next = assemble_from_fields(F, cfg.coupling, opt.lambda, aopt).traj;
        next.nonlinear = nonlinear;
        res.distance.push_back(sup_distance(next, res.iterates.empty() ? nullptr : &res.iterates.back()));
        res.iterates.push_back(std::move(next));

        const std::size_t m = res.distance.size();
        if (res.distance.back() <= opt.tol) {
            res.converged = true;
            break;
        }
        if (m >= 3 && res.distance[m - 1] > res.distance[m - 2] && res.distance[m - 2] > res.distance[m - 3]) {
            res.diverged = true;
            break;
        }
    }
    return res;
}

double state_distance(const GraphState& a, const GraphState& ref)
{
    double num = 0, den = 0;
    for (int e = 0; e < 3; ++e) {
        const GridFunction fa = edge_of(a, e), fr = edge_of(ref, e);
        const double q = fa.spacing / fr.spacing;
        const long step = std::lround(q);
        if (step < 1 || std::fabs(q - double(step)) > 1e-9 * q)
            throw ContractError("state_distance: reference spacing must divide the spacing of a");
        for (std::size_t i = 0; i < fa.size(); ++i) {
            const double pos = (fa.x(i) - fr.origin) / fr.spacing;
            const long j = std::lround(pos);
            if (j < 0 || std::size_t(j) >= fr.size() || std::fabs(pos - double(j)) > 1e-6)
                throw ContractError("state_distance: reference grid does not cover the nodes of a");
            const double d = fa.samples[i] - fr.samples[std::size_t(j)];
            num += d * d;
            den += fr.samples[std::size_t(j)] * fr.samples[std::size_t(j)];
        }
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace ygraph
