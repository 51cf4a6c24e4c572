#pragma once

#include <array>
#include <vector>

#include "diracspec/grid.hpp"
#include "diracspec/model.hpp"
#include "diracspec/spinor.hpp"

namespace dirac {

/// Trajectories whose magnitude exceeds this value abort with OverflowError.
inline constexpr double kOverflowCap = 1e150;

enum class Direction { forward, backward };

/// Right-hand side of rho^{-1} B y' + Omega y = lambda y solved for y' on `segment`.
Spinor dirac_rhs(const ProblemSpec& spec, double lambda, double x, const Spinor& y, int segment);

/// T_k(lambda) for interface k in {1, 2}.
Mat2 jump_matrix(const ProblemSpec& spec, double lambda, int k);

/// Forward: T_k(lambda) y. Backward: T_k(lambda)^{-1} y.
Spinor transmission_map(const ProblemSpec& spec, double lambda, int k, const Spinor& y, Direction dir);

/// Classical RK4 over one segment of `grid`. The result is ordered by ascending x;
/// for a backward run y0 is the value at the right endpoint and is stored last.
std::vector<Spinor> integrate_segment(const ProblemSpec& spec, double lambda, int segment, const Spinor& y0,
                                      Direction dir, const Grid& grid);

enum class SolutionKind { phi, psi, aux_phi, weyl, resolvent };

/// Dense trajectory on the three segments. values[i] holds the nodes of
/// segment i, so values[0].back() is the value at xi1 - 0 and values[1].front()
/// the value at xi1 + 0.
struct PiecewiseSolution {
    SolutionKind kind = SolutionKind::phi;
    double lambda = 0.0;
    Grid grid;
    std::array<std::vector<Spinor>, 3> values;
    ProblemSpec spec;

    /// Value at x; interface points give the left limit.
    Spinor at(double x) const { return at(x, spec.segment_of(x)); }
    /// Value at x taken from `segment`. Off-grid points of homogeneous solutions
    /// use one RK4 sub-step from the nearest node on the left; resolvent
    /// trajectories use cubic interpolation.
    Spinor at(double x, int segment) const;

    const Spinor& left_limit(int k) const { return values[static_cast<std::size_t>(k - 1)].back(); }
    const Spinor& right_limit(int k) const { return values[static_cast<std::size_t>(k)].front(); }
};

/// Solves with the left initial pair (lambda a'_2 - a_2, lambda a'_1 - a_1).
PiecewiseSolution solve_phi(const ProblemSpec& spec, double lambda, const Grid& grid);
PiecewiseSolution solve_phi(const ProblemSpec& spec, double lambda);

/// Solves backward from the right pair (lambda g'_2 + g_2, lambda g'_1 + g_1).
PiecewiseSolution solve_psi(const ProblemSpec& spec, double lambda, const Grid& grid);
PiecewiseSolution solve_psi(const ProblemSpec& spec, double lambda);

/// Auxiliary solution with left pair (a'_2 / d1, a'_1 / d1).
PiecewiseSolution solve_aux_phi(const ProblemSpec& spec, double lambda, const Grid& grid);
PiecewiseSolution solve_aux_phi(const ProblemSpec& spec, double lambda);

/// u1 v2 - u2 v1 at x (left limit at interfaces). Throws std::out_of_range for
/// x outside [a, b] and GridMismatchError when the two solutions differ in grid or lambda.
double wronskian(const PiecewiseSolution& u, const PiecewiseSolution& v, double x);
/// Same at node k of `segment`.
double wronskian_at_node(const PiecewiseSolution& u, const PiecewiseSolution& v, int segment, int k);

/// Delta(lambda) = (lambda g'_1 + g_1) phi_31(b) - (lambda g'_2 + g_2) phi_32(b),
/// from a forward sweep that stores nothing.
double char_delta(const ProblemSpec& spec, double lambda, const Grid& grid);
double char_delta(const ProblemSpec& spec, double lambda);

/// psi(a, lambda) from a backward sweep that stores nothing.
Spinor psi_at_left(const ProblemSpec& spec, double lambda, const Grid& grid);

/// Delta(lambda) from exact rotations and jump matrices; zero potential only.
double closed_form_delta(const ProblemSpec& spec, double lambda);

/// lambda^4 sin(l r2 (xi2-xi1)) [g'_1 sin(l r3 (b-xi2)) + g'_2 cos(l r3 (b-xi2))]
/// [a'_2 cos(l r1 (xi1-a)) - a'_1 sin(l r1 (xi1-a))]
double char_delta0(const ProblemSpec& spec, double lambda);

enum class Component { phi11, phi12, phi21, phi22, phi31, phi32, psi11, psi12, psi21, psi22, psi31, psi32 };

/// 0-based segment a component lives on.
int component_segment(Component c);

/// Leading trigonometric term of the requested component (no remainder).
/// Throws std::invalid_argument if x is outside the component's segment.
double leading_term(const ProblemSpec& spec, double lambda, double x, Component which);

}  // namespace dirac
