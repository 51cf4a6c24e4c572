#include "diracspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "diracspec/errors.hpp"
#include "diracspec/quadrature.hpp"

namespace dirac {

RhsField RhsField::constant(double f1, double f2) {
    RhsField f;
    f.kind_ = Kind::constant;
    f.constant_ = {f1, f2};
    return f;
}

RhsField RhsField::sinusoid(std::vector<Term> terms) {
    for (const auto& t : terms)
        if (t.component != 1 && t.component != 2) throw ValidationError("rhs term component must be 1 or 2");
    RhsField f;
    f.kind_ = Kind::sinusoid;
    f.terms_ = std::move(terms);
    return f;
}

RhsField RhsField::table(std::vector<double> x, std::vector<double> f1, std::vector<double> f2) {
    if (x.empty() || x.size() != f1.size() || x.size() != f2.size())
        throw ValidationError("rhs table arrays must be nonempty and of equal length");
    for (std::size_t k = 1; k < x.size(); ++k)
        if (!(x[k] > x[k - 1])) throw ValidationError("rhs table abscissae not strictly increasing");
    RhsField f;
    f.kind_ = Kind::table;
    f.x_ = std::move(x);
    f.f1_ = std::move(f1);
    f.f2_ = std::move(f2);
    return f;
}

RhsField RhsField::from_function(SpinorFunction fn) {
    RhsField f;
    f.kind_ = Kind::function;
    f.fn_ = std::move(fn);
    return f;
}

Spinor RhsField::at(double x) const {
    switch (kind_) {
        case Kind::zero:
            return {};
        case Kind::constant:
            return constant_;
        case Kind::sinusoid: {
            Spinor out;
            for (const auto& t : terms_) {
                const double v = t.amplitude * std::sin(t.frequency * x + t.phase);
                (t.component == 1 ? out.y1 : out.y2) += v;
            }
            return out;
        }
        case Kind::table: {
            if (x <= x_.front()) return {f1_.front(), f2_.front()};
            if (x >= x_.back()) return {f1_.back(), f2_.back()};
            const auto k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
            const double w = (x - x_[k - 1]) / (x_[k] - x_[k - 1]);
            return {f1_[k - 1] + w * (f1_[k] - f1_[k - 1]), f2_[k - 1] + w * (f2_[k] - f2_[k - 1])};
        }
        case Kind::function:
            return fn_(x);
    }
    return {};
}

RhsField load_rhs(std::string_view text) {
    using json = nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed rhs document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rhs") || !doc["rhs"].is_object()) throw ParseError("missing field rhs");
    const auto& r = doc["rhs"];
    if (!r.contains("kind") || !r["kind"].is_string()) throw ParseError("rhs.kind missing");
    const auto kind = r["kind"].get<std::string>();
    const auto num = [&](const json& node, const char* key, double fallback) {
        if (!node.contains(key)) return fallback;
        if (!node[key].is_number()) throw ParseError(std::string("rhs field ") + key + " is not a number");
        return node[key].get<double>();
    };
    const auto vec = [&](const char* key) {
        if (!r.contains(key) || !r[key].is_array()) throw ParseError(std::string("rhs.") + key + " must be an array");
        std::vector<double> out;
        for (const auto& e : r[key]) {
            if (!e.is_number()) throw ParseError(std::string("rhs.") + key + " holds a non-number");
            out.push_back(e.get<double>());
        }
        return out;
    };
    if (kind == "zero") return RhsField::zero();
    if (kind == "constant") return RhsField::constant(num(r, "f1", 0.0), num(r, "f2", 0.0));
    if (kind == "sinusoid") {
        if (!r.contains("terms") || !r["terms"].is_array()) throw ParseError("rhs.terms must be an array");
        std::vector<RhsField::Term> terms;
        for (const auto& t : r["terms"]) {
            if (!t.is_object()) throw ParseError("rhs term must be an object");
            terms.push_back({static_cast<int>(num(t, "component", 1.0)), num(t, "amplitude", 1.0),
                             num(t, "frequency", 1.0), num(t, "phase", 0.0)});
        }
        return RhsField::sinusoid(std::move(terms));
    }
    if (kind == "table") return RhsField::table(vec("x"), vec("f1"), vec("f2"));
    throw ParseError("unknown rhs kind '" + kind + "'");
}

std::array<std::vector<Spinor>, 3> sample_rhs(const RhsField& f, const Grid& grid) {
    std::array<std::vector<Spinor>, 3> out;
    for (int i = 0; i < kSegments; ++i) {
        auto& v = out[static_cast<std::size_t>(i)];
        v.reserve(static_cast<std::size_t>(grid[i].size()));
        for (int k = 0; k < grid[i].size(); ++k) v.push_back(f.at(grid[i].node(k)));
    }
    return out;
}

Element rhs_element(const RhsField& f, const Grid& grid) {
    Element e;
    e.grid = grid;
    e.f = sample_rhs(f, grid);
    return e;
}

double ResidualReport::max_condition() const { return *std::max_element(conditions.begin(), conditions.end()); }

double near_spectrum_threshold(double lambda) { return 1e-8 * std::pow(1.0 + std::fabs(lambda), 4); }

namespace {

void check_samples(const std::array<std::vector<Spinor>, 3>& f, const Grid& grid) {
    for (int i = 0; i < kSegments; ++i)
        if (f[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(grid[i].size()))
            throw GridMismatchError("rhs samples do not match the grid");
}

void check_delta(double lambda, double delta) {
    if (!(std::fabs(delta) > near_spectrum_threshold(lambda))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "near spectrum: lambda too close to an eigenvalue (lambda = " << lambda
            << ", |Delta| = " << std::fabs(delta) << ")";
        throw NearSpectrumError(msg.str());
    }
}

}  // namespace

ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const std::array<std::vector<Spinor>, 3>& f,
                                const Grid& grid) {
    check_samples(f, grid);
    const auto phi = solve_phi(spec, lambda, grid);
    const auto psi = solve_psi(spec, lambda, grid);
    const double delta = cross(phi.values[2].back(), psi.values[2].back());
    check_delta(lambda, delta);

    std::array<std::vector<double>, 3> left, right;
    double total_left = 0.0, total_right = 0.0;
    std::vector<double> a, b;
    for (int i = 0; i < kSegments; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const double rho = spec.rho[si];
        const std::size_t n = f[si].size();
        a.resize(n);
        b.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = rho * dot(f[si][k], phi.values[si][k]);
            b[k] = rho * dot(f[si][k], psi.values[si][k]);
        }
        left[si] = cumulative_simpson(a, grid[i].h());
        right[si] = cumulative_simpson(b, grid[i].h());
        for (auto& v : left[si]) v += total_left;
        for (auto& v : right[si]) v += total_right;
        total_left = left[si].back();
        total_right = right[si].back();
    }

    ResolventResult res;
    res.delta = delta;
    res.u.kind = SolutionKind::resolvent;
    res.u.lambda = lambda;
    res.u.grid = grid;
    res.u.spec = spec;
    for (std::size_t i = 0; i < 3; ++i) {
        auto& u = res.u.values[i];
        u.resize(f[i].size());
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double A = left[i][k];
            const double B = total_right - right[i][k];
            u[k] = (A / delta) * psi.values[i][k] + (B / delta) * phi.values[i][k];
        }
    }
    res.residual = residual_norm(spec, lambda, f, res.u);
    return res;
}

ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const RhsField& f, const Grid& grid) {
    return resolvent_apply(spec, lambda, sample_rhs(f, grid), grid);
}

ResolventResult resolvent_apply(const ProblemSpec& spec, double lambda, const RhsField& f) {
    return resolvent_apply(spec, lambda, f, make_grid(spec, lambda));
}

ResidualReport residual_norm(const ProblemSpec& spec, double lambda, const std::array<std::vector<Spinor>, 3>& f,
                             const PiecewiseSolution& u) {
    check_samples(f, u.grid);
    check_samples(u.values, u.grid);
    ResidualReport rep;
    for (int i = 0; i < kSegments; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& sg = u.grid[i];
        const auto& v = u.values[si];
        const double h = sg.h();
        const double rho = spec.rho[si];
        for (const auto& y : v) rep.scale = std::max(rep.scale, std::max(std::fabs(y.y1), std::fabs(y.y2)));
        for (int k = 2; k + 2 <= sg.steps; ++k) {
            const auto j = static_cast<std::size_t>(k);
            const Spinor d = (1.0 / (12.0 * h)) * (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]);
            const auto w = spec.potential.at(sg.node(k), i);
            const Spinor y = v[j];
            const double r1 = d.y2 / rho + w.p * y.y1 + w.q * y.y2 - lambda * y.y1 - f[si][j].y1;
            const double r2 = -d.y1 / rho + w.q * y.y1 + w.r * y.y2 - lambda * y.y2 - f[si][j].y2;
            rep.equation = std::max(rep.equation, std::max(std::fabs(r1), std::fabs(r2)));
        }
    }
    const Spinor ua = u.values[0].front();
    const Spinor ub = u.values[2].back();
    rep.conditions[0] = std::fabs(lambda * (spec.alpha_prime[0] * ua.y1 - spec.alpha_prime[1] * ua.y2) -
                                  (spec.alpha[0] * ua.y1 - spec.alpha[1] * ua.y2));
    rep.conditions[1] = std::fabs(lambda * (spec.gamma_prime[0] * ub.y1 - spec.gamma_prime[1] * ub.y2) +
                                  (spec.gamma[0] * ub.y1 - spec.gamma[1] * ub.y2));
    for (int k = 1; k <= 2; ++k) {
        const auto& t = spec.trans[static_cast<std::size_t>(k - 1)];
        const Spinor l = u.left_limit(k);
        const Spinor r = u.right_limit(k);
        const auto c = static_cast<std::size_t>(2 * k);
        rep.conditions[c] = std::fabs(r.y1 - t.scale * l.y1);
        rep.conditions[c + 1] = std::fabs(r.y2 - (t.shift + lambda) * l.y1 - l.y2 / t.scale);
    }
    return rep;
}

ResidualReport residual_norm(const ProblemSpec& spec, double lambda, const RhsField& f, const PiecewiseSolution& u) {
    return residual_norm(spec, lambda, sample_rhs(f, u.grid), u);
}

GreenFunction::GreenFunction(const ProblemSpec& spec, double lambda, const Grid& grid)
    : spec_(spec),
      lambda_(lambda),
      grid_(grid),
      phi_(solve_phi(spec, lambda, grid)),
      psi_(solve_psi(spec, lambda, grid)),
      delta_(cross(phi_.values[2].back(), psi_.values[2].back())) {
    check_delta(lambda, delta_);
}

GreenFunction::GreenFunction(const ProblemSpec& spec, double lambda)
    : GreenFunction(spec, lambda, make_grid(spec, lambda)) {}

Mat2 GreenFunction::operator()(double x, double t) const {
    for (double v : {x, t}) {
        if (!(v >= spec_.a && v <= spec_.b)) throw std::out_of_range("green kernel: point outside [a, b]");
        if (v == spec_.xi1 || v == spec_.xi2) throw std::invalid_argument("green kernel: interface point");
    }
    const int seg = spec_.segment_of(t);
    const double w = spec_.rho[static_cast<std::size_t>(seg)] / delta_;
    if (t <= x) return w * Mat2::outer(psi_.at(x), phi_.at(t, seg));
    return w * Mat2::outer(phi_.at(x), psi_.at(t, seg));
}

Spinor GreenFunction::integrate(const std::array<std::vector<Spinor>, 3>& f, double x) const {
    check_samples(f, grid_);
    const int seg = spec_.segment_of(x);
    const auto& sg = grid_[seg];
    const double pos = (x - sg.x0) / sg.h();
    const int node = static_cast<int>(std::lround(pos));
    if (std::fabs(pos - node) > 1e-9 || node < 2 || node > sg.steps - 2)
        throw std::invalid_argument("green kernel integration needs an interior grid node");

    double A = 0.0, B = 0.0;
    std::vector<double> a, b;
    for (int i = 0; i < kSegments; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const double rho = spec_.rho[si];
        const std::size_t n = f[si].size();
        a.resize(n);
        b.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = rho * dot(phi_.values[si][k], f[si][k]);
            b[k] = rho * dot(psi_.values[si][k], f[si][k]);
        }
        const double h = grid_[i].h();
        if (i < seg) {
            A += simpson(a, h);
        } else if (i > seg) {
            B += simpson(b, h);
        } else {
            const auto split = static_cast<std::size_t>(node);
            A += simpson(std::span<const double>(a).first(split + 1), h);
            B += simpson(std::span<const double>(b).subspan(split), h);
        }
    }
    const auto j = static_cast<std::size_t>(node);
    const auto si = static_cast<std::size_t>(seg);
    return (A / delta_) * psi_.values[si][j] + (B / delta_) * phi_.values[si][j];
}

}  // namespace dirac
