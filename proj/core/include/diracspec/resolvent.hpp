#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "diracspec/model.hpp"
#include "diracspec/propagate.hpp"

namespace dirac {

/// Spinor-valued right-hand side f = (f1, f2) on [a, b].
class RhsField {
public:
    enum class Kind { zero, constant, sinusoid, table, function };

    /// amplitude * sin(frequency * x + phase) added to component 1 or 2.
    struct Term {
        int component = 1;
        double amplitude = 1.0;
        double frequency = 1.0;
        double phase = 0.0;
    };

    static RhsField zero() { return {}; }
    static RhsField constant(double f1, double f2);
    static RhsField sinusoid(std::vector<Term> terms);
    /// Linear interpolation in x, held flat outside the samples.
    static RhsField table(std::vector<double> x, std::vector<double> f1, std::vector<double> f2);
    static RhsField from_function(SpinorFunction f);

    Kind kind() const { return kind_; }
    Spinor at(double x) const;

private:
    Kind kind_ = Kind::zero;
    Spinor constant_{};
    std::vector<Term> terms_;
    std::vector<double> x_, f1_, f2_;
    SpinorFunction fn_;
};

/// Reads the "rhs" section of a JSON document.
RhsField load_rhs(std::string_view text);

/// Samples of f on every node of the grid.
std::array<std::vector<Spinor>, 3> sample_rhs(const RhsField& f, const Grid& grid);

/// f lifted to the Hilbert space with zero scalar slots.
Element rhs_element(const RhsField& f, const Grid& grid);

/// Defects of a trajectory against rho^{-1} B U' + Omega U - lambda U = f and the
/// six boundary/transmission conditions.
struct ResidualReport {
    double equation = 0.0;
    std::array<double, 6> conditions{};  ///< |l_1 U|, ..., |l_6 U|
    double scale = 0.0;                  ///< max |U| over the grid

    double max_condition() const;
};

struct ResolventResult {
    PiecewiseSolution u;
    double delta = 0.0;
    ResidualReport residual;
};

/// |Delta(lambda)| must exceed this for resolvent-type evaluations.
double near_spectrum_threshold(double lambda);

/// U(x) = psi(x)/Delta int_a^x rho (f . phi) dt + phi(x)/Delta int_x^b rho (f . psi) dt,
/// with cumulative Simpson sums on the propagation grid. Throws NearSpectrumError.
ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const RhsField& f, const Grid& grid);
ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const RhsField& f);

/// Same from per-node samples of f; throws GridMismatchError on a size mismatch.
ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const std::array<std::vector<Spinor>, 3>& f,
                                const Grid& grid);

/// Equation residual by five-point centred differences (nodes next to an
/// interface or an endpoint are skipped) plus the six condition residuals.
ResidualReport residual_norm(const ProblemSpec& spec, double lambda, const std::array<std::vector<Spinor>, 3>& f,
                             const PiecewiseSolution& u);
ResidualReport residual_norm(const ProblemSpec& spec, double lambda, const RhsField& f, const PiecewiseSolution& u);

/// Green kernel G(x, t) = rho(t) psi(x) phi(t)^T / Delta for t <= x and
/// rho(t) phi(x) psi(t)^T / Delta for t > x.
class GreenFunction {
public:
    GreenFunction(const ProblemSpec& spec, double lambda, const Grid& grid);
    GreenFunction(const ProblemSpec& spec, double lambda);

    /// Throws std::invalid_argument at interface points.
    Mat2 operator()(double x, double t) const;

    /// int_a^b G(x, t) f(t) dt by Simpson on the grid, split at x. x must be a
    /// grid node strictly inside a segment.
    Spinor integrate(const std::array<std::vector<Spinor>, 3>& f, double x) const;

    double delta() const { return delta_; }
    const Grid& grid() const { return grid_; }

private:
    ProblemSpec spec_;
    double lambda_;
    Grid grid_;
    PiecewiseSolution phi_;
    PiecewiseSolution psi_;
    double delta_;
};

inline Mat2 green_kernel(const ProblemSpec& spec, double lambda, double x, double t) {
    return GreenFunction(spec, lambda)(x, t);
}

}  // namespace dirac
