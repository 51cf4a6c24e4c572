#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "diracspec/grid.hpp"
#include "diracspec/spinor.hpp"

namespace dirac {

/// Entries of the symmetric potential matrix [[p, q], [q, r]] at one point.
struct PotentialSample {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

/// Samples of p, q, r on one segment, linearly interpolated.
struct PotentialTable {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> r;
};

class PotentialField {
public:
    enum class Kind { zero, constant, table };

    static PotentialField zero() { return {}; }
    static PotentialField constant(double p0, double q0, double r0);
    /// One table per segment. Values outside a table's abscissae are held at the
    /// nearest sample, so interface points never need a sample of their own.
    static PotentialField table(std::array<PotentialTable, 3> segments);

    Kind kind() const { return kind_; }
    const PotentialSample& constant_value() const { return constant_; }
    const std::array<PotentialTable, 3>& tables() const { return tables_; }

    /// True when the field is constant on every segment (zero or constant kind).
    bool piecewise_constant() const { return kind_ != Kind::table; }

    /// Value inside segment `segment` (0-based) without range checks.
    PotentialSample at(double x, int segment) const;

private:
    Kind kind_ = Kind::zero;
    PotentialSample constant_{};
    std::array<PotentialTable, 3> tables_{};
};

struct Transmission {
    double scale = 1.0;  ///< alpha_3 (first interface) or alpha_5 (second)
    double shift = 0.0;  ///< alpha_4 or alpha_6
};

/// Full coefficient set of the boundary value problem.
///
/// Segments are 0-based here: segment 0 is [a, xi1), 1 is (xi1, xi2), 2 is (xi2, b].
/// On segment i the derivative term is (1/rho[i]) B y' and the inner product weight is rho[i].
struct ProblemSpec {
    double a = 0.0;
    double b = 1.0;
    double xi1 = 0.25;
    double xi2 = 0.5;
    std::array<double, 3> rho{1.0, 1.0, 1.0};
    PotentialField potential{};
    std::array<double, 2> alpha{0.0, 1.0};        ///< alpha_1, alpha_2
    std::array<double, 2> alpha_prime{-1.0, 0.0}; ///< alpha'_1, alpha'_2
    std::array<double, 2> gamma{0.0, -1.0};       ///< gamma_1, gamma_2
    std::array<double, 2> gamma_prime{1.0, 0.0};  ///< gamma'_1, gamma'_2
    std::array<Transmission, 2> trans{};

    double d1() const { return alpha[0] * alpha_prime[1] - alpha[1] * alpha_prime[0]; }
    double d2() const { return gamma[0] * gamma_prime[1] - gamma[1] * gamma_prime[0]; }

    double segment_begin(int i) const { return i == 0 ? a : (i == 1 ? xi1 : xi2); }
    double segment_end(int i) const { return i == 0 ? xi1 : (i == 1 ? xi2 : b); }
    double segment_length(int i) const { return segment_end(i) - segment_begin(i); }

    /// Segment whose closed range holds x; interface points resolve to the left segment.
    int segment_of(double x) const { return x <= xi1 ? 0 : (x <= xi2 ? 1 : 2); }

    /// Sum of rho_i * len_i; pi / D is the asymptotic eigenvalue spacing.
    double optical_length() const;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const ProblemSpec& spec);

/// The worked example configuration: a=0, b=pi, xi=(pi/4, pi/2), zero potential,
/// identity-at-zero transmissions, d1 = d2 = 1.
ProblemSpec example_problem(std::array<double, 3> rho = {1.0, 1.0, 1.0});

/// Parses and validates a JSON problem document.
ProblemSpec load_problem(std::string_view text);
ProblemSpec load_problem_file(const std::filesystem::path& path);
/// Serialises a spec back to the document format (17 significant digits).
std::string dump_problem(const ProblemSpec& spec);

/// Potential entries at x in the given segment; throws if x is outside [a, b] or
/// outside the segment's closed range.
PotentialSample eval_potential(const ProblemSpec& spec, double x, int segment);

/// Element of L2 + L2 + R^4: sampled spinor plus the four scalar slots.
///
/// For domain elements the scalars are traces of f; for images under T they
/// are independent values.
struct Element {
    Grid grid;
    std::array<std::vector<Spinor>, 3> f;
    double r = 0.0;   ///< alpha'_1 f1(a) - alpha'_2 f2(a) for domain elements
    double s = 0.0;   ///< gamma'_1 f1(b) - gamma'_2 f2(b)
    double v1 = 0.0;  ///< f1(xi1 - 0)
    double v2 = 0.0;  ///< f1(xi2 - 0)
};

using SpinorFunction = std::function<Spinor(double)>;

/// Samples a smooth seed on the grid and scales its first component on the
/// second and third segments by alpha_3 and alpha_3*alpha_5 so that the
/// first-component transmission conditions hold exactly.
Element make_domain_element(const ProblemSpec& spec, const Grid& grid, const SpinorFunction& seed);

/// Domain element built from per-segment samples (e.g. an eigenfunction); the
/// scalar slots are the traces of the samples.
Element domain_element_from_samples(const ProblemSpec& spec, const Grid& grid,
                                    std::array<std::vector<Spinor>, 3> samples);

/// Weighted inner product: sum_i rho_i * int (f.g) + alpha_3 v1 w1 + alpha_5 v2 w2
/// + r r' / d1 + s s' / d2. Throws GridMismatchError for different grids.
double inner_product(const Element& F, const Element& G, const ProblemSpec& spec);

/// Image TF of a domain element: (l f, alpha_1 f1(a) - alpha_2 f2(a),
/// -(gamma_1 f1(b) - gamma_2 f2(b)), jump residuals at both interfaces).
/// Derivatives come from fourth-order finite differences on the grid.
Element apply_operator(const ProblemSpec& spec, const Element& F);

}  // namespace dirac
