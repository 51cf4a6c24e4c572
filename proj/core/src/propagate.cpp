#include "diracspec/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diracspec/errors.hpp"

namespace dirac {

Spinor dirac_rhs(const ProblemSpec& spec, double lambda, double x, const Spinor& y, int segment) {
    const auto w = spec.potential.at(x, segment);
    const double rho = spec.rho[static_cast<std::size_t>(segment)];
    return {rho * (w.q * y.y1 + (w.r - lambda) * y.y2), rho * ((lambda - w.p) * y.y1 - w.q * y.y2)};
}

Mat2 jump_matrix(const ProblemSpec& spec, double lambda, int k) {
    if (k != 1 && k != 2) throw std::out_of_range("interface index must be 1 or 2");
    const auto& t = spec.trans[static_cast<std::size_t>(k - 1)];
    return {t.scale, 0.0, t.shift + lambda, 1.0 / t.scale};
}

Spinor transmission_map(const ProblemSpec& spec, double lambda, int k, const Spinor& y, Direction dir) {
    if (k != 1 && k != 2) throw std::out_of_range("interface index must be 1 or 2");
    const auto& t = spec.trans[static_cast<std::size_t>(k - 1)];
    if (dir == Direction::forward) return {t.scale * y.y1, (t.shift + lambda) * y.y1 + y.y2 / t.scale};
    return {y.y1 / t.scale, -(t.shift + lambda) * y.y1 + t.scale * y.y2};
}

namespace {

void guard(const Spinor& y) {
    if (!(std::fabs(y.y1) <= kOverflowCap && std::fabs(y.y2) <= kOverflowCap))
        throw OverflowError("trajectory exceeded the overflow cap; lambda is outside the resolvable band");
}

/// One RK4 step of size h (possibly negative) from (x, y).
Spinor rk4_step(const ProblemSpec& spec, double lambda, int seg, double x, const Spinor& y, double h) {
    const Spinor k1 = dirac_rhs(spec, lambda, x, y, seg);
    const Spinor k2 = dirac_rhs(spec, lambda, x + 0.5 * h, y + (0.5 * h) * k1, seg);
    const Spinor k3 = dirac_rhs(spec, lambda, x + 0.5 * h, y + (0.5 * h) * k2, seg);
    const Spinor k4 = dirac_rhs(spec, lambda, x + h, y + h * k3, seg);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// For a constant coefficient matrix A one RK4 step is the matrix polynomial
/// I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24.
Mat2 rk4_matrix(const ProblemSpec& spec, double lambda, int seg, double h) {
    const auto w = spec.potential.at(spec.segment_begin(seg), seg);
    const double rho = spec.rho[static_cast<std::size_t>(seg)];
    const Mat2 z = h * Mat2{rho * w.q, rho * (w.r - lambda), rho * (lambda - w.p), -rho * w.q};
    const Mat2 z2 = z * z;
    const Mat2 z3 = z2 * z;
    const Mat2 z4 = z3 * z;
    return Mat2::identity() + z + 0.5 * z2 + (1.0 / 6.0) * z3 + (1.0 / 24.0) * z4;
}

/// Advances y across a whole segment, optionally recording every node.
template <class Sink>
Spinor sweep(const ProblemSpec& spec, double lambda, int seg, Spinor y, Direction dir, const SegmentGrid& sg,
             Sink&& sink) {
    const int n = sg.steps;
    const double h = sg.h();
    guard(y);
    if (spec.potential.piecewise_constant()) {
        const Mat2 m = rk4_matrix(spec, lambda, seg, dir == Direction::forward ? h : -h);
        for (int k = 0; k < n; ++k) {
            y = m * y;
            guard(y);
            sink(y);
        }
        return y;
    }
    for (int k = 0; k < n; ++k) {
        if (dir == Direction::forward)
            y = rk4_step(spec, lambda, seg, sg.node(k), y, h);
        else
            y = rk4_step(spec, lambda, seg, sg.node(n - k), y, -h);
        guard(y);
        sink(y);
    }
    return y;
}

PiecewiseSolution forward_solution(const ProblemSpec& spec, double lambda, const Grid& grid, Spinor start,
                                   SolutionKind kind) {
    PiecewiseSolution sol;
    sol.kind = kind;
    sol.lambda = lambda;
    sol.grid = grid;
    sol.spec = spec;
    Spinor y = start;
    for (int i = 0; i < kSegments; ++i) {
        if (i > 0) y = transmission_map(spec, lambda, i, y, Direction::forward);
        sol.values[static_cast<std::size_t>(i)] = integrate_segment(spec, lambda, i, y, Direction::forward, grid);
        y = sol.values[static_cast<std::size_t>(i)].back();
    }
    return sol;
}

Spinor phi_start(const ProblemSpec& s, double lambda) {
    return {lambda * s.alpha_prime[1] - s.alpha[1], lambda * s.alpha_prime[0] - s.alpha[0]};
}

Spinor psi_start(const ProblemSpec& s, double lambda) {
    return {lambda * s.gamma_prime[1] + s.gamma[1], lambda * s.gamma_prime[0] + s.gamma[0]};
}

}  // namespace

std::vector<Spinor> integrate_segment(const ProblemSpec& spec, double lambda, int segment, const Spinor& y0,
                                      Direction dir, const Grid& grid) {
    if (segment < 0 || segment >= kSegments) throw std::out_of_range("segment index out of range");
    const auto& sg = grid[segment];
    std::vector<Spinor> out;
    out.reserve(static_cast<std::size_t>(sg.size()));
    out.push_back(y0);
    sweep(spec, lambda, segment, y0, dir, sg, [&](const Spinor& y) { out.push_back(y); });
    if (dir == Direction::backward) std::reverse(out.begin(), out.end());
    return out;
}

Spinor PiecewiseSolution::at(double x, int segment) const {
    if (segment < 0 || segment >= kSegments) throw std::out_of_range("segment index out of range");
    const auto& sg = grid[segment];
    if (!(x >= sg.x0 && x <= sg.x1)) throw std::out_of_range("x outside the requested segment");
    const auto& v = values[static_cast<std::size_t>(segment)];
    const double h = sg.h();
    int k = std::clamp(static_cast<int>(std::floor((x - sg.x0) / h)), 0, sg.steps);
    if (x == sg.node(k)) return v[static_cast<std::size_t>(k)];
    if (k == sg.steps) --k;
    if (kind != SolutionKind::resolvent)
        return rk4_step(spec, lambda, segment, sg.node(k), v[static_cast<std::size_t>(k)], x - sg.node(k));
    const int j0 = std::clamp(k - 1, 0, std::max(0, sg.steps - 3));
    Spinor out;
    for (int j = j0; j < j0 + 4 && j <= sg.steps; ++j) {
        double w = 1.0;
        for (int m = j0; m < j0 + 4 && m <= sg.steps; ++m)
            if (m != j) w *= (x - sg.node(m)) / (sg.node(j) - sg.node(m));
        out += w * v[static_cast<std::size_t>(j)];
    }
    return out;
}

PiecewiseSolution solve_phi(const ProblemSpec& spec, double lambda, const Grid& grid) {
    return forward_solution(spec, lambda, grid, phi_start(spec, lambda), SolutionKind::phi);
}

PiecewiseSolution solve_phi(const ProblemSpec& spec, double lambda) {
    return solve_phi(spec, lambda, make_grid(spec, lambda));
}

PiecewiseSolution solve_aux_phi(const ProblemSpec& spec, double lambda, const Grid& grid) {
    const double d1 = spec.d1();
    return forward_solution(spec, lambda, grid, {spec.alpha_prime[1] / d1, spec.alpha_prime[0] / d1},
                            SolutionKind::aux_phi);
}

PiecewiseSolution solve_aux_phi(const ProblemSpec& spec, double lambda) {
    return solve_aux_phi(spec, lambda, make_grid(spec, lambda));
}

PiecewiseSolution solve_psi(const ProblemSpec& spec, double lambda, const Grid& grid) {
    PiecewiseSolution sol;
    sol.kind = SolutionKind::psi;
    sol.lambda = lambda;
    sol.grid = grid;
    sol.spec = spec;
    Spinor y = psi_start(spec, lambda);
    for (int i = kSegments - 1; i >= 0; --i) {
        if (i < kSegments - 1) y = transmission_map(spec, lambda, i + 1, y, Direction::backward);
        sol.values[static_cast<std::size_t>(i)] = integrate_segment(spec, lambda, i, y, Direction::backward, grid);
        y = sol.values[static_cast<std::size_t>(i)].front();
    }
    return sol;
}

PiecewiseSolution solve_psi(const ProblemSpec& spec, double lambda) {
    return solve_psi(spec, lambda, make_grid(spec, lambda));
}

namespace {

void check_pair(const PiecewiseSolution& u, const PiecewiseSolution& v) {
    if (!(u.grid == v.grid) || u.lambda != v.lambda)
        throw GridMismatchError("wronskian: solutions differ in grid or lambda");
}

}  // namespace

double wronskian(const PiecewiseSolution& u, const PiecewiseSolution& v, double x) {
    check_pair(u, v);
    if (!(x >= u.spec.a && x <= u.spec.b)) throw std::out_of_range("wronskian: x outside [a, b]");
    return cross(u.at(x), v.at(x));
}

double wronskian_at_node(const PiecewiseSolution& u, const PiecewiseSolution& v, int segment, int k) {
    check_pair(u, v);
    const auto i = static_cast<std::size_t>(segment);
    const auto j = static_cast<std::size_t>(k);
    return cross(u.values.at(i).at(j), v.values.at(i).at(j));
}

double char_delta(const ProblemSpec& spec, double lambda, const Grid& grid) {
    Spinor y = phi_start(spec, lambda);
    for (int i = 0; i < kSegments; ++i) {
        if (i > 0) y = transmission_map(spec, lambda, i, y, Direction::forward);
        y = sweep(spec, lambda, i, y, Direction::forward, grid[i], [](const Spinor&) {});
    }
    return (lambda * spec.gamma_prime[0] + spec.gamma[0]) * y.y1 -
           (lambda * spec.gamma_prime[1] + spec.gamma[1]) * y.y2;
}

double char_delta(const ProblemSpec& spec, double lambda) {
    return char_delta(spec, lambda, make_grid(spec, lambda));
}

Spinor psi_at_left(const ProblemSpec& spec, double lambda, const Grid& grid) {
    Spinor y = psi_start(spec, lambda);
    for (int i = kSegments - 1; i >= 0; --i) {
        if (i < kSegments - 1) y = transmission_map(spec, lambda, i + 1, y, Direction::backward);
        y = sweep(spec, lambda, i, y, Direction::backward, grid[i], [](const Spinor&) {});
    }
    return y;
}

namespace {

Mat2 rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
}

}  // namespace

double closed_form_delta(const ProblemSpec& spec, double lambda) {
    if (spec.potential.kind() != PotentialField::Kind::zero)
        throw ValidationError("closed_form_delta needs a zero potential");
    Spinor y = phi_start(spec, lambda);
    for (int i = 0; i < kSegments; ++i) {
        if (i > 0) y = jump_matrix(spec, lambda, i) * y;
        y = rotation(lambda * spec.rho[static_cast<std::size_t>(i)] * spec.segment_length(i)) * y;
    }
    return (lambda * spec.gamma_prime[0] + spec.gamma[0]) * y.y1 -
           (lambda * spec.gamma_prime[1] + spec.gamma[1]) * y.y2;
}

double char_delta0(const ProblemSpec& s, double lambda) {
    const double t1 = lambda * s.rho[0] * (s.xi1 - s.a);
    const double t2 = lambda * s.rho[1] * (s.xi2 - s.xi1);
    const double t3 = lambda * s.rho[2] * (s.b - s.xi2);
    const double l2 = lambda * lambda;
    return l2 * l2 * std::sin(t2) * (s.gamma_prime[0] * std::sin(t3) + s.gamma_prime[1] * std::cos(t3)) *
           (s.alpha_prime[1] * std::cos(t1) - s.alpha_prime[0] * std::sin(t1));
}

int component_segment(Component c) {
    switch (c) {
        case Component::phi11:
        case Component::phi12:
        case Component::psi11:
        case Component::psi12:
            return 0;
        case Component::phi21:
        case Component::phi22:
        case Component::psi21:
        case Component::psi22:
            return 1;
        default:
            return 2;
    }
}

double leading_term(const ProblemSpec& s, double lambda, double x, Component which) {
    const int seg = component_segment(which);
    if (!(x >= s.segment_begin(seg) && x <= s.segment_end(seg)))
        throw std::invalid_argument("leading_term: x is not in the component's segment");

    const double A1 = lambda * s.alpha_prime[0] - s.alpha[0];
    const double A2 = lambda * s.alpha_prime[1] - s.alpha[1];
    const double G1 = lambda * s.gamma_prime[0] + s.gamma[0];
    const double G2 = lambda * s.gamma_prime[1] + s.gamma[1];
    const double s4 = s.trans[0].shift + lambda;
    const double s6 = s.trans[1].shift + lambda;
    const double r1 = lambda * s.rho[0], r2 = lambda * s.rho[1], r3 = lambda * s.rho[2];

    // left factor at xi1 and right factor at xi2
    const double left = -A1 * std::sin(r1 * (s.xi1 - s.a)) + A2 * std::cos(r1 * (s.xi1 - s.a));
    const double right = G2 * std::cos(r3 * (s.xi2 - s.b)) - G1 * std::sin(r3 * (s.xi2 - s.b));

    switch (which) {
        case Component::phi11:
            return -A1 * std::sin(r1 * (x - s.a)) + A2 * std::cos(r1 * (x - s.a));
        case Component::phi12:
            return A1 * std::cos(r1 * (x - s.a)) + A2 * std::sin(r1 * (x - s.a));
        case Component::phi21:
            return -s4 * left * std::sin(r2 * (x - s.xi1));
        case Component::phi22:
            return s4 * left * std::cos(r2 * (x - s.xi1));
        case Component::phi31:
            return s4 * s6 * left * std::sin(r2 * (s.xi2 - s.xi1)) * std::sin(r3 * (x - s.xi2));
        case Component::phi32:
            return -s4 * s6 * left * std::sin(r2 * (s.xi2 - s.xi1)) * std::cos(r3 * (x - s.xi2));
        case Component::psi31:
            return G2 * std::cos(r3 * (x - s.b)) - G1 * std::sin(r3 * (x - s.b));
        case Component::psi32:
            return G2 * std::sin(r3 * (x - s.b)) + G1 * std::cos(r3 * (x - s.b));
        case Component::psi21:
            return s6 * right * std::sin(r2 * (x - s.xi2));
        case Component::psi22:
            return -s6 * right * std::cos(r2 * (x - s.xi2));
        case Component::psi11:
            return s4 * s6 * right * std::sin(r2 * (s.xi1 - s.xi2)) * std::sin(r1 * (x - s.xi1));
        case Component::psi12:
            return -s4 * s6 * right * std::sin(r2 * (s.xi1 - s.xi2)) * std::cos(r1 * (x - s.xi1));
    }
    return 0.0;
}

}  // namespace dirac
