#include "diracspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "diracspec/errors.hpp"
#include "diracspec/quadrature.hpp"

namespace dirac {

using json = nlohmann::json;

PotentialField PotentialField::constant(double p0, double q0, double r0) {
    PotentialField f;
    f.kind_ = Kind::constant;
    f.constant_ = {p0, q0, r0};
    return f;
}

PotentialField PotentialField::table(std::array<PotentialTable, 3> segments) {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        auto& t = segments[i];
        const std::string where = "potential table segment " + std::to_string(i + 1);
        if (t.x.empty()) throw ValidationError(where + ": no samples");
        if (t.q.empty()) t.q.assign(t.x.size(), 0.0);
        if (t.r.empty()) t.r.assign(t.x.size(), 0.0);
        if (t.p.empty()) t.p.assign(t.x.size(), 0.0);
        if (t.p.size() != t.x.size() || t.q.size() != t.x.size() || t.r.size() != t.x.size())
            throw ValidationError(where + ": sample arrays differ in length");
        for (std::size_t k = 1; k < t.x.size(); ++k)
            if (!(t.x[k] > t.x[k - 1])) throw ValidationError(where + ": abscissae not strictly increasing");
        for (std::size_t k = 0; k < t.x.size(); ++k)
            if (!std::isfinite(t.p[k]) || !std::isfinite(t.q[k]) || !std::isfinite(t.r[k]))
                throw ValidationError(where + ": non-finite sample");
    }
    PotentialField f;
    f.kind_ = Kind::table;
    f.tables_ = std::move(segments);
    return f;
}

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto k = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

}  // namespace

PotentialSample PotentialField::at(double x, int segment) const {
    switch (kind_) {
        case Kind::zero:
            return {};
        case Kind::constant:
            return constant_;
        case Kind::table: {
            const auto& t = tables_[static_cast<std::size_t>(segment)];
            return {interpolate(t.x, t.p, x), interpolate(t.x, t.q, x), interpolate(t.x, t.r, x)};
        }
    }
    return {};
}

double ProblemSpec::optical_length() const {
    double d = 0.0;
    for (int i = 0; i < kSegments; ++i) d += rho[static_cast<std::size_t>(i)] * segment_length(i);
    return d;
}

void validate(const ProblemSpec& s) {
    const auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {s.a, s.b, s.xi1, s.xi2, s.rho[0], s.rho[1], s.rho[2], s.alpha[0], s.alpha[1],
                     s.alpha_prime[0], s.alpha_prime[1], s.gamma[0], s.gamma[1], s.gamma_prime[0],
                     s.gamma_prime[1], s.trans[0].scale, s.trans[0].shift, s.trans[1].scale,
                     s.trans[1].shift})
        if (!finite(v)) throw ValidationError("non-finite coefficient");
    if (!(s.a < s.xi1 && s.xi1 < s.xi2 && s.xi2 < s.b)) throw ValidationError("a < xi1 < xi2 < b violated");
    for (std::size_t i = 0; i < 3; ++i)
        if (!(s.rho[i] > 0.0)) throw ValidationError("rho" + std::to_string(i + 1) + " > 0 violated");
    if (!(s.trans[0].scale > 0.0)) throw ValidationError("alpha3 > 0 violated");
    if (!(s.trans[1].scale > 0.0)) throw ValidationError("alpha5 > 0 violated");
    if (!(s.d1() > 0.0)) throw ValidationError("d1 <= 0");
    if (!(s.d2() > 0.0)) throw ValidationError("d2 <= 0");
    if (s.potential.kind() == PotentialField::Kind::constant) {
        const auto& c = s.potential.constant_value();
        if (!finite(c.p) || !finite(c.q) || !finite(c.r)) throw ValidationError("non-finite potential");
    }
    if (s.potential.kind() == PotentialField::Kind::table) {
        const auto& t = s.potential.tables();
        if (t[0].x.front() > s.a || t[2].x.back() < s.b)
            throw ValidationError("potential table does not cover [a, b]");
    }
}

ProblemSpec example_problem(std::array<double, 3> rho) {
    ProblemSpec s;
    s.a = 0.0;
    s.b = std::numbers::pi;
    s.xi1 = std::numbers::pi / 4.0;
    s.xi2 = std::numbers::pi / 2.0;
    s.rho = rho;
    s.potential = PotentialField::zero();
    s.alpha = {0.0, 1.0};
    s.alpha_prime = {-1.0, 0.0};
    s.gamma = {0.0, -1.0};
    s.gamma_prime = {1.0, 0.0};
    s.trans = {Transmission{1.0, 0.0}, Transmission{1.0, 0.0}};
    return s;
}

namespace {

double number(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key)) throw ParseError("missing field " + where + "." + key);
    const auto& v = node.at(key);
    if (!v.is_number()) throw ParseError("field " + where + "." + key + " is not a number");
    return v.get<double>();
}

std::array<double, 2> pair(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key)) throw ParseError("missing field " + where + "." + key);
    const auto& v = node.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ParseError("field " + where + "." + key + " must be a pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> numbers(const json& node, const char* key, bool required) {
    if (!node.contains(key)) {
        if (required) throw ParseError(std::string("missing table field ") + key);
        return {};
    }
    const auto& v = node.at(key);
    if (!v.is_array()) throw ParseError(std::string("table field ") + key + " is not an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ParseError(std::string("table field ") + key + " holds a non-number");
        out.push_back(e.get<double>());
    }
    return out;
}

PotentialField parse_potential(const json& node) {
    if (!node.is_object() || !node.contains("kind") || !node["kind"].is_string())
        throw ParseError("potential.kind missing");
    const auto kind = node["kind"].get<std::string>();
    if (kind == "zero") return PotentialField::zero();
    if (kind == "constant") {
        const auto opt = [&](const char* k) {
            if (!node.contains(k)) return 0.0;
            if (!node[k].is_number()) throw ParseError(std::string("potential.") + k + " is not a number");
            return node[k].get<double>();
        };
        return PotentialField::constant(opt("p0"), opt("q0"), opt("r0"));
    }
    if (kind == "table") {
        if (!node.contains("segments") || !node["segments"].is_array() || node["segments"].size() != 3)
            throw ParseError("potential.segments must list three segment tables");
        std::array<PotentialTable, 3> tables;
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& seg = node["segments"][i];
            tables[i].x = numbers(seg, "x", true);
            tables[i].p = numbers(seg, "p", false);
            tables[i].q = numbers(seg, "q", false);
            tables[i].r = numbers(seg, "r", false);
        }
        return PotentialField::table(std::move(tables));
    }
    throw ParseError("unknown potential kind '" + kind + "'");
}

json potential_json(const PotentialField& f) {
    switch (f.kind()) {
        case PotentialField::Kind::zero:
            return {{"kind", "zero"}};
        case PotentialField::Kind::constant: {
            const auto& c = f.constant_value();
            return {{"kind", "constant"}, {"p0", c.p}, {"q0", c.q}, {"r0", c.r}};
        }
        case PotentialField::Kind::table: {
            json segs = json::array();
            for (const auto& t : f.tables()) segs.push_back({{"x", t.x}, {"p", t.p}, {"q", t.q}, {"r", t.r}});
            return {{"kind", "table"}, {"segments", segs}};
        }
    }
    return {};
}

}  // namespace

ProblemSpec load_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed problem document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("problem document must be an object");
    for (const char* key : {"interval", "rho", "potential", "left", "right", "transmission"})
        if (!doc.contains(key)) throw ParseError(std::string("missing field ") + key);

    ProblemSpec s;
    const auto& iv = doc["interval"];
    s.a = number(iv, "a", "interval");
    s.b = number(iv, "b", "interval");
    s.xi1 = number(iv, "xi1", "interval");
    s.xi2 = number(iv, "xi2", "interval");

    const auto& rho = doc["rho"];
    if (!rho.is_array() || rho.size() != 3) throw ParseError("rho must list three numbers");
    for (std::size_t i = 0; i < 3; ++i) {
        if (!rho[i].is_number()) throw ParseError("rho holds a non-number");
        s.rho[i] = rho[i].get<double>();
    }

    s.potential = parse_potential(doc["potential"]);
    s.alpha = pair(doc["left"], "alpha", "left");
    s.alpha_prime = pair(doc["left"], "alpha_prime", "left");
    s.gamma = pair(doc["right"], "gamma", "right");
    s.gamma_prime = pair(doc["right"], "gamma_prime", "right");

    const auto& tr = doc["transmission"];
    if (!tr.is_array() || tr.size() != 2) throw ParseError("transmission must list two interfaces");
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string where = "transmission[" + std::to_string(k) + "]";
        s.trans[k].scale = number(tr[k], "scale", where);
        s.trans[k].shift = number(tr[k], "shift", where);
    }

    validate(s);
    return s;
}

ProblemSpec load_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_problem(ss.str());
}

std::string dump_problem(const ProblemSpec& s) {
    json doc;
    doc["interval"] = {{"a", s.a}, {"b", s.b}, {"xi1", s.xi1}, {"xi2", s.xi2}};
    doc["rho"] = s.rho;
    doc["potential"] = potential_json(s.potential);
    doc["left"] = {{"alpha", s.alpha}, {"alpha_prime", s.alpha_prime}};
    doc["right"] = {{"gamma", s.gamma}, {"gamma_prime", s.gamma_prime}};
    doc["transmission"] = json::array({{{"scale", s.trans[0].scale}, {"shift", s.trans[0].shift}},
                                       {{"scale", s.trans[1].scale}, {"shift", s.trans[1].shift}}});
    return doc.dump(2);
}

PotentialSample eval_potential(const ProblemSpec& spec, double x, int segment) {
    if (!(x >= spec.a && x <= spec.b)) throw std::out_of_range("eval_potential: x outside [a, b]");
    if (segment < 0 || segment >= kSegments) throw std::out_of_range("eval_potential: bad segment index");
    if (x < spec.segment_begin(segment) || x > spec.segment_end(segment))
        throw std::out_of_range("eval_potential: x outside the segment");
    return spec.potential.at(x, segment);
}

Grid make_grid(const ProblemSpec& spec, double lambda_bound, const GridOptions& options) {
    const double lam = std::max(1.0, std::fabs(lambda_bound));
    const int per_wavelength = std::max(20, options.steps_per_wavelength);
    Grid g;
    for (int i = 0; i < kSegments; ++i) {
        const double len = spec.segment_length(i);
        const double h_cap = std::min(len / 512.0, 2.0 * std::numbers::pi / (per_wavelength * spec.rho[static_cast<std::size_t>(i)] * lam));
        int n = std::max(options.steps_per_segment, static_cast<int>(std::ceil(len / h_cap)));
        if (n % 2 == 1) ++n;
        g.segments[static_cast<std::size_t>(i)] = {spec.segment_begin(i), spec.segment_end(i), n};
    }
    return g;
}

Element domain_element_from_samples(const ProblemSpec& spec, const Grid& grid,
                                    std::array<std::vector<Spinor>, 3> samples) {
    for (int i = 0; i < kSegments; ++i)
        if (samples[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(grid[i].size()))
            throw GridMismatchError("samples do not match the grid");
    Element e;
    e.grid = grid;
    e.f = std::move(samples);
    const Spinor fa = e.f[0].front();
    const Spinor fb = e.f[2].back();
    e.r = spec.alpha_prime[0] * fa.y1 - spec.alpha_prime[1] * fa.y2;
    e.s = spec.gamma_prime[0] * fb.y1 - spec.gamma_prime[1] * fb.y2;
    e.v1 = e.f[0].back().y1;
    e.v2 = e.f[1].back().y1;
    return e;
}

Element make_domain_element(const ProblemSpec& spec, const Grid& grid, const SpinorFunction& seed) {
    std::array<std::vector<Spinor>, 3> samples;
    const double scale[3] = {1.0, spec.trans[0].scale, spec.trans[0].scale * spec.trans[1].scale};
    for (int i = 0; i < kSegments; ++i) {
        const auto& sg = grid[i];
        auto& out = samples[static_cast<std::size_t>(i)];
        out.reserve(static_cast<std::size_t>(sg.size()));
        for (int k = 0; k < sg.size(); ++k) {
            Spinor v = seed(sg.node(k));
            v.y1 *= scale[i];
            out.push_back(v);
        }
    }
    return domain_element_from_samples(spec, grid, std::move(samples));
}

double inner_product(const Element& F, const Element& G, const ProblemSpec& spec) {
    if (!(F.grid == G.grid)) throw GridMismatchError("inner_product: elements live on different grids");
    double total = 0.0;
    std::vector<double> integrand;
    for (int i = 0; i < kSegments; ++i) {
        const auto& f = F.f[static_cast<std::size_t>(i)];
        const auto& g = G.f[static_cast<std::size_t>(i)];
        if (f.size() != g.size() || f.size() != static_cast<std::size_t>(F.grid[i].size()))
            throw GridMismatchError("inner_product: sample count does not match the grid");
        integrand.resize(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) integrand[k] = dot(f[k], g[k]);
        total += spec.rho[static_cast<std::size_t>(i)] * simpson(integrand, F.grid[i].h());
    }
    total += spec.trans[0].scale * F.v1 * G.v1 + spec.trans[1].scale * F.v2 * G.v2;
    total += F.r * G.r / spec.d1() + F.s * G.s / spec.d2();
    return total;
}

Element apply_operator(const ProblemSpec& spec, const Element& F) {
    Element out;
    out.grid = F.grid;
    std::vector<double> c1, c2;
    for (int i = 0; i < kSegments; ++i) {
        const auto& f = F.f[static_cast<std::size_t>(i)];
        const auto& sg = F.grid[i];
        const double rho = spec.rho[static_cast<std::size_t>(i)];
        c1.resize(f.size());
        c2.resize(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            c1[k] = f[k].y1;
            c2[k] = f[k].y2;
        }
        const auto d1 = differentiate(c1, sg.h());
        const auto d2 = differentiate(c2, sg.h());
        auto& lf = out.f[static_cast<std::size_t>(i)];
        lf.resize(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            const auto w = spec.potential.at(sg.node(static_cast<int>(k)), i);
            // rho^{-1} B f' + Omega f with B = [[0, 1], [-1, 0]]
            lf[k] = {d2[k] / rho + w.p * f[k].y1 + w.q * f[k].y2,
                     -d1[k] / rho + w.q * f[k].y1 + w.r * f[k].y2};
        }
    }
    const Spinor fa = F.f[0].front();
    const Spinor fb = F.f[2].back();
    const Spinor l1 = F.f[0].back(), r1 = F.f[1].front();
    const Spinor l2 = F.f[1].back(), r2 = F.f[2].front();
    out.r = spec.alpha[0] * fa.y1 - spec.alpha[1] * fa.y2;
    out.s = -(spec.gamma[0] * fb.y1 - spec.gamma[1] * fb.y2);
    out.v1 = r1.y2 - spec.trans[0].shift * l1.y1 - l1.y2 / spec.trans[0].scale;
    out.v2 = r2.y2 - spec.trans[1].shift * l2.y1 - l2.y2 / spec.trans[1].scale;
    return out;
}

}  // namespace dirac
