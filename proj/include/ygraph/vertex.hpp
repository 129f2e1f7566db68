#pragma once

#include "ygraph/forcing.hpp"
#include "ygraph/graph.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ygraph {

enum class CouplingKind { Type1, Type2 };

/// Type1: u = a2 v = a3 w, u_x = b2 v_x + b3 w_x, u_xx = c2 v_xx + c3 w_xx.
/// Type2: u = a2 v + a3 w, u_x = b2 v_x + b3 w_x, u_xx = c2 v_xx = c3 w_xx.
struct VertexCoupling {
    CouplingKind kind = CouplingKind::Type1;
    double a2 = 1, a3 = 1, b2 = 0, b3 = 0, c2 = 1, c3 = 1;

    /// Energy-type conditions in alpha, beta. Type1 maps to a = alpha,
    /// b = beta, c = 1/alpha; Type2 to a = 1/alpha, b = beta, c = alpha.
    static VertexCoupling special(CouplingKind kind, double alpha2, double alpha3, double beta2, double beta3);
    void validate() const;
};

struct LambdaVector {
    double l1 = 0, l2 = 0, l3 = 0, l4 = 0;
    double s = 0;

    /// Open admissible interval (max{s-1, 0}, min{s+1/2, 1/2}).
    static std::array<double, 2> window(double s);
    bool admissible() const;
};

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;

/// Columns act on (gamma1, gamma3, gamma4, gamma2).
struct BoundaryMatrix {
    Matrix4c entries;
    LambdaVector lambda;
    VertexCoupling coupling;
};

BoundaryMatrix build_matrix(const VertexCoupling& c, const LambdaVector& l);

/// Partial-pivot LU determinant.
cplx det_m(const BoundaryMatrix& m);

/// |det| > 1e-8 * prod of row 2-norms.
double invertibility_threshold(const BoundaryMatrix& m);
bool is_invertible(const BoundaryMatrix& m);

enum class AnchorBranch { Low, High };

/// Low: (0, 3 eps/pi, 0, 0). High: (1/2, 1/2 - 3 eps/pi, 1/2, 1/2).
LambdaVector anchor_lambda(double eps, AnchorBranch b);

/// 2 sqrt(3) alpha2 alpha3 sin(eps) (1 + 1/alpha2^2 + 1/alpha3^2 + beta3/alpha3 + beta2/alpha2),
/// the determinant at either anchor for either kind of special coupling.
cplx closed_form_det(double alpha2, double alpha3, double beta2, double beta3, double eps, AnchorBranch b);

struct ScanSample {
    double lambda = 0, lambda2 = 0;
    cplx det;
    double threshold = 0;
    bool invertible = false;
    bool anchor = false;
};

struct ScanReport {
    double s = 0, eps = 0;
    double lo = 0, hi = 0;
    bool window_empty = false;
    /// First row is the anchor point of the family, then interior samples.
    std::vector<ScanSample> samples;
    /// max |det(l + d) - det(l)| / d over the samples, d = 1e-3.
    double lipschitz = 0;
    std::size_t invertible_count = 0;

    void write_csv(std::ostream& os) const;
};

/// Scans (l, l2, l, l) over the admissible window; l2 = 3 eps/pi for s < 1
/// and 1/2 - 3 eps/pi for s >= 1.
ScanReport admissible_scan(double s, const VertexCoupling& c, std::size_t resolution, double eps = 0.1);

/// gamma = M^{-1} F per sample. F is in row order of M; the result is in
/// natural order (gamma1, gamma2, gamma3, gamma4).
std::array<CTimeTrace, 4> solve_gamma(const BoundaryMatrix& m, const std::array<CTimeTrace, 4>& f);

/// Rows of F from the free-evolution traces at x = 0 (index j = derivative order).
std::array<CTimeTrace, 4> build_rhs(const VertexCoupling& c, const std::array<std::array<TimeTrace, 3>, 3>& traces);

struct AssemblyOptions {
    /// Step of the gamma traces.
    double dt = 0.00125;
    /// Output every stride-th level.
    std::size_t stride = 40;
    ForcingOptions forcing;
    GroupOptions group;
};

struct LinearSolution {
    Trajectory traj;
    BoundaryMatrix m;
    std::array<CTimeTrace, 4> gamma;
    std::array<CTimeTrace, 4> rhs;
    /// Largest imaginary part of the assembled fields relative to their scale.
    double imag_residual = 0;
};

/// u = V_-^{l1} g1 + V_-^{l2} g2 + e^{-t d^3} u0, v = V_+^{l3} g3 + e^{-t d^3} v0,
/// w = V_+^{l4} g4 + e^{-t d^3} w0. The data are whole-line extensions on one
/// grid with a node at 0.
LinearSolution assemble_linear_solution(const std::array<GridFunction, 3>& data, const VertexCoupling& c,
                                        const LambdaVector& l, double T, const AssemblyOptions& opt = {});

/// The same assembly with the free parts given: F_e on one whole-line grid at
/// levels t_j = j dt (the gamma step), for instance free evolution plus a
/// Duhamel term. opt.dt is unused.
LinearSolution assemble_from_fields(const std::array<SpaceTimeField, 3>& free, const VertexCoupling& c,
                                    const LambdaVector& l, const AssemblyOptions& opt = {});

struct VertexResidualReport {
    std::vector<double> t;
    /// Relation k at time n; relations in row order of M.
    std::array<std::vector<double>, 4> residual;
    /// Largest edge trace of the relation's derivative order over the trajectory.
    std::array<double, 4> scale{};
    double max_relative = 0;
    double mean_relative = 0;
};

/// One-sided traces, optionally only for t in [t_min, t_max].
VertexResidualReport verify_vertex_conditions(const Trajectory& traj, const VertexCoupling& c, double t_min = 0,
                                              double t_max = 1e300);

/// Relations in row order of M evaluated on traces.
std::array<double, 4> coupling_residuals(const VertexCoupling& c, const VertexTraces& tr);

std::string to_string(CouplingKind k);

} // namespace ygraph
