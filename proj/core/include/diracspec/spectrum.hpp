#pragma once

#include <functional>
#include <string>
#include <vector>

#include "diracspec/grid.hpp"
#include "diracspec/model.hpp"

namespace dirac {

/// Closed spectral window [lo, hi].
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    bool empty() const { return !(hi > lo); }
};

struct ScanOptions {
    /// Uniform scan step as a fraction of the asymptotic spacing pi / D (at most 0.5).
    double step_fraction = 0.25;
    /// Extra samples placed within half a spacing of every root of each trig factor of Delta_0.
    int refine_points = 48;
    GridOptions grid{};
};

/// Sign-change bracket of a characteristic function. lo == hi marks a sample
/// where the function vanished exactly.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct SpectralDatum {
    int n = 0;
    double lambda = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
    double delta_dot = 0.0;
    double lemma4_residual = 0.0;
};

struct SpectrumWindow {
    Window window;
    double scan_step = 0.0;
    Grid grid;
    std::vector<SpectralDatum> data;
    std::vector<std::string> warnings;

    std::vector<double> lambdas() const;
    std::size_t size() const { return data.size(); }
};

/// pi / D with D the optical length of the interval.
double asymptotic_spacing(const ProblemSpec& spec);

/// Grid that resolves every lambda in the window.
Grid window_grid(const ProblemSpec& spec, const Window& window, const GridOptions& options = {});

/// Which characteristic function a scan targets. The auxiliary function has the
/// same leading factors except at the left end, where a'_1 sin + a'_2 cos replaces
/// a'_2 cos - a'_1 sin.
enum class Characteristic { main, auxiliary };

/// Sample abscissae used for bracketing: a uniform scan plus dense clusters
/// around the roots of the leading trig factors and around 0.
std::vector<double> scan_points(const ProblemSpec& spec, const Window& window, const ScanOptions& options = {},
                                Characteristic which = Characteristic::main);

/// Brackets of an arbitrary function over the given sample points.
std::vector<Bracket> brackets_of(const std::function<double(double)>& f, const std::vector<double>& points);

/// Sign-change brackets of char_delta over the window.
std::vector<Bracket> seed_grid(const ProblemSpec& spec, const Window& window, const ScanOptions& options = {});

/// Bisection to width 1e-12 max(1, |lambda|) followed by three secant steps kept
/// inside the bracket.
double refine_root(const std::function<double(double)>& f, const Bracket& bracket);

/// Refined, merged roots of f over the brackets. Throws NumericalError when two
/// distinct roots are closer than 1e-7.
std::vector<double> roots_in(const std::function<double(double)>& f, const std::vector<Bracket>& brackets);

/// Eigenvalues in the window with n and delta_dot populated (mu, kappa empty).
/// Adds a warning when a gap exceeds three asymptotic spacings.
SpectrumWindow find_eigenvalues(const ProblemSpec& spec, const Window& window, const ScanOptions& options = {});

/// Richardson-extrapolated central difference with h = 1e-5 max(1, |lambda|).
double delta_dot(const std::function<double(double)>& f, double lambda);
double delta_dot(const ProblemSpec& spec, double lambda, const Grid& grid);

/// Eigen-element built from phi(., lambda_n).
Element eigen_element(const ProblemSpec& spec, double lambda_n, const Grid& grid);

/// Squared norm of the eigen-element; throws NumericalError if not positive.
double normalizer(const ProblemSpec& spec, double lambda_n, const Grid& grid);
double normalizer(const ProblemSpec& spec, double lambda_n);

/// (a'_1 psi_11(a) - a'_2 psi_12(a)) / d1.
double kappa(const ProblemSpec& spec, double lambda_n, const Grid& grid);
double kappa(const ProblemSpec& spec, double lambda_n);

/// find_eigenvalues plus mu, kappa and the residual |delta_dot + kappa mu| / max(1, |delta_dot|).
SpectrumWindow spectral_data(const ProblemSpec& spec, const Window& window, const ScanOptions& options = {});

/// Pairwise inner products of the eigen-elements of a located spectrum.
std::vector<std::vector<double>> gram_matrix(const ProblemSpec& spec, const SpectrumWindow& spectrum);
std::vector<std::vector<double>> gram_matrix(const ProblemSpec& spec, const Window& window,
                                             const ScanOptions& options = {});

}  // namespace dirac
