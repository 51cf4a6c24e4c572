#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diracspec/model.hpp"
#include "diracspec/spectrum.hpp"

namespace dirac {

/// Scalar coefficient of a ProblemSpec that a fit may vary.
enum class Slot {
    p0,
    q0,
    r0,
    alpha1,
    alpha2,
    alpha3,
    alpha4,
    alpha5,
    alpha6,
    alpha_prime1,
    alpha_prime2,
    gamma1,
    gamma2,
    gamma_prime1,
    gamma_prime2,
};

std::string slot_name(Slot s);
/// Throws ParseError for an unknown name.
Slot slot_from_name(std::string_view name);

double get_slot(const ProblemSpec& spec, Slot s);
/// Potential slots turn a zero potential into a constant one; table potentials are rejected.
void set_slot(ProblemSpec& spec, Slot s, double value);

struct FreeParameter {
    Slot slot = Slot::p0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Which target sequences drive the mismatch.
enum class FitData { eigenvalues, spectral_data, two_spectra };

struct ParameterFamily {
    ProblemSpec base;
    std::vector<FreeParameter> free;
    FitData data = FitData::eigenvalues;

    ProblemSpec at(const std::vector<double>& values) const;
    std::vector<double> base_values() const;
};

/// Checks bounds, that every box corner yields a valid spec, and that two-spectra
/// fits leave a_1, a_2, a'_1, a'_2 fixed. Throws ValidationError.
void validate_family(const ParameterFamily& family);

/// Parses a problem document with an extra "family" section:
/// {"free": [{"slot": "p0", "lo": -1, "hi": 1}], "data": "eigenvalues"}.
ParameterFamily load_family(std::string_view text);

struct FitTarget {
    Window window;
    std::vector<double> lambdas;
    std::optional<std::vector<double>> mus;
    std::optional<std::vector<double>> taus;
};

/// Eigenvalues n = 0..count-1 of `spec` (and optionally their normalizers and
/// the auxiliary eigenvalues inside the same window). The window ends halfway
/// between the first/last target eigenvalue and its outer neighbour.
FitTarget make_target(const ProblemSpec& spec, int count, FitData data = FitData::eigenvalues,
                      const ScanOptions& options = {});

/// Large finite value returned for unusable candidates.
inline constexpr double kMismatchPenalty = 1e6;

/// Sum of squared differences of sorted-order matched sequences; a count
/// difference of one is absorbed by trying both end alignments, larger
/// differences or numerical failures give kMismatchPenalty.
double spectral_mismatch(const ProblemSpec& candidate, const FitTarget& target, const ScanOptions& options = {});

struct FitConfig {
    int grid_points = 7;
    int max_iterations = 400;
    double x_tolerance = 1e-9;  ///< simplex size relative to each box width
    double f_tolerance = 1e-18;
    ScanOptions scan{};
};

struct TraceRow {
    int iteration = 0;
    std::string phase;
    std::vector<double> values;
    double mismatch = 0.0;
};

struct FitResult {
    std::vector<double> values;
    double mismatch = 0.0;
    double initial_mismatch = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<TraceRow> trace;
};

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Deterministic Nelder-Mead constrained to the box by projection.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& step,
                          int max_iterations, double x_tolerance, double f_tolerance,
                          const std::function<void(int, const std::vector<double>&, double)>& on_iteration = {});

/// Base point, then a coarse grid over the box, then Nelder-Mead from the best grid point.
FitResult fit_parameters(const ParameterFamily& family, const FitTarget& target, const FitConfig& config = {});

}  // namespace dirac
