#include "coarsefield/io.hpp"

#include "coarsefield/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace coarsefield::io {

namespace {

json big_integer(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

mpz_class integer_from_json(const json& j) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0)
            fail(ErrorKind::Structural, "expected a decimal integer, got " + j.dump());
        return z;
    }
    fail(ErrorKind::Structural, "expected an integer, got " + j.dump());
}

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        fail(ErrorKind::Structural, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::size_t point_index(const FiniteMetricSpace& s, const json& id) {
    if (!id.is_string()) fail(ErrorKind::Structural, "point ids are strings");
    return s.index_of(id.get<std::string>());
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Structural, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Structural, path.string() + ": " + e.what());
    }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        if (!out) fail(ErrorKind::Structural, "cannot write " + path.string());
        out << text;
        if (!out) fail(ErrorKind::Structural, "cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const json& value) {
    write_text_atomic(path, value.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Scalars and matrices

json to_json(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return json::array({big_integer(c.get_num()), big_integer(c.get_den())});
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer() || j.is_string()) return Rational(integer_from_json(j));
    if (j.is_array() && j.size() == 2) {
        const mpz_class den = integer_from_json(j[1]);
        if (den == 0) fail(ErrorKind::Structural, "rational with zero denominator");
        Rational q(integer_from_json(j[0]), den);
        q.canonicalize();
        return q;
    }
    fail(ErrorKind::Structural, "expected a rational [num, den], got " + j.dump());
}

json to_json(const ComplexRational& z) {
    if (sgn(z.im) == 0) return to_json(z.re);
    return {{"re", to_json(z.re)}, {"im", to_json(z.im)}};
}

ComplexRational complex_from_json(const json& j) {
    if (j.is_object())
        return {rational_from_json(member(j, "re")),
                j.contains("im") ? rational_from_json(j.at("im")) : Rational(0)};
    return ComplexRational(rational_from_json(j));
}

json to_json(const ExactMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ExactMatrix exact_matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail(ErrorKind::Structural, "matrix must be a non-empty array of rows");
    const std::size_t cols = j[0].size();
    ExactMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail(ErrorKind::Structural, "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto z = m(i, j);
            if (z.imag() == 0)
                row.push_back(z.real());
            else
                row.push_back(json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) fail(ErrorKind::Structural, "matrix must be a non-empty array of rows");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail(ErrorKind::Structural, "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& v = j[r][c];
            if (v.is_number())
                m(r, c) = v.get<double>();
            else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
                m(r, c) = {v[0].get<double>(), v[1].get<double>()};
            else
                fail(ErrorKind::Structural, "matrix entry must be a number or [re, im]");
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Metric core

json to_json(const FiniteMetricSpace& s) {
    json dist = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.size(); ++j) row.push_back(to_json(s(i, j)));
        dist.push_back(std::move(row));
    }
    json out = {{"points", s.points()}, {"dist", std::move(dist)}};
    if (s.basepoint()) out["basepoint"] = *s.basepoint();
    return out;
}

FiniteMetricSpace space_from_json(const json& j) {
    const auto points = member(j, "points").get<std::vector<std::string>>();
    const json& dist = member(j, "dist");
    if (!dist.is_array() || dist.size() != points.size())
        fail(ErrorKind::Structural, "distance table must have one row per point");
    RationalMatrix d(points.size(), points.size());
    for (std::size_t r = 0; r < points.size(); ++r) {
        if (!dist[r].is_array() || dist[r].size() != points.size())
            fail(ErrorKind::Structural, "distance table must be square");
        for (std::size_t c = 0; c < points.size(); ++c) d(r, c) = rational_from_json(dist[r][c]);
    }
    std::optional<std::string> base;
    if (j.contains("basepoint") && !j.at("basepoint").is_null()) base = j.at("basepoint").get<std::string>();
    return FiniteMetricSpace::make(points, std::move(d), base);
}

FiniteMetricSpace space_ref_from_json(const json& j, const std::filesystem::path& base) {
    if (j.is_string()) return space_from_json(read_json_file(base / j.get<std::string>()));
    return space_from_json(j);
}

json to_json(const ValidationReport& r) {
    json out = {{"passed", r.passed}};
    out["separation"] = r.separation ? to_json(*r.separation) : json(nullptr);
    json profile = json::array();
    for (const auto& [radius, count] : r.ball_profile)
        profile.push_back({{"radius", to_json(radius)}, {"max_ball", count}});
    out["ball_profile"] = std::move(profile);
    if (r.violation)
        out["violation"] = {{"property", r.violation->property},
                            {"points", r.violation->points},
                            {"detail", r.violation->detail}};
    else
        out["violation"] = nullptr;
    return out;
}

json to_json(const GluedMetric& d) {
    json cross = json::array();
    for (std::size_t x = 0; x < d.left().size(); ++x) {
        json row = json::array();
        for (std::size_t y = 0; y < d.right().size(); ++y) row.push_back(to_json(d(x, y)));
        cross.push_back(std::move(row));
    }
    return {{"left", to_json(d.left())}, {"right", to_json(d.right())}, {"cross", std::move(cross)}};
}

GluedMetric glue_from_json(const json& j, const std::filesystem::path& base) {
    const FiniteMetricSpace left = space_ref_from_json(member(j, "left"), base);
    const FiniteMetricSpace right = space_ref_from_json(member(j, "right"), base);
    const json& cross = member(j, "cross");
    if (!cross.is_array() || cross.size() != left.size())
        fail(ErrorKind::Structural, "cross table must have one row per left point");
    RationalMatrix c(left.size(), right.size());
    for (std::size_t x = 0; x < left.size(); ++x) {
        if (!cross[x].is_array() || cross[x].size() != right.size())
            fail(ErrorKind::Structural, "cross table must have one column per right point");
        for (std::size_t y = 0; y < right.size(); ++y) c(x, y) = rational_from_json(cross[x][y]);
    }
    return glue(left, right, std::move(c));
}

json to_json(const Composition& c, const FiniteMetricSpace& middle) {
    json out = to_json(c.metric);
    json mids = json::array();
    for (std::size_t x = 0; x < c.midpoint.rows(); ++x) {
        json row = json::array();
        for (std::size_t z = 0; z < c.midpoint.cols(); ++z) row.push_back(middle.point(c.midpoint(x, z)));
        mids.push_back(std::move(row));
    }
    out["midpoints"] = std::move(mids);
    return out;
}

json to_json(const ControlFunction& f) {
    json bp = json::array();
    for (const auto& [t, v] : f.breakpoints()) bp.push_back({to_json(t), to_json(v)});
    return {{"breakpoints", std::move(bp)}, {"repair_slope", to_json(ControlFunction::repair_slope())}};
}

ControlFunction control_from_json(const json& j) {
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& p : member(j, "breakpoints")) {
        if (!p.is_array() || p.size() != 2) fail(ErrorKind::Structural, "breakpoint must be [t, phi]");
        pts.emplace_back(rational_from_json(p[0]), rational_from_json(p[1]));
    }
    return ControlFunction::from_breakpoints(std::move(pts));
}

json to_json(const CoarseComparison& c) {
    return {{"verdict", to_string(c.verdict)},
            {"forward", c.forward ? to_json(*c.forward) : json(nullptr)},
            {"backward", c.backward ? to_json(*c.backward) : json(nullptr)},
            {"note", c.note}};
}

// ---------------------------------------------------------------------------
// Posets

json to_json(const FinitePoset& p) {
    json leq = json::array();
    for (std::size_t a = 0; a < p.size(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < p.size(); ++b) row.push_back(p.leq(a, b));
        leq.push_back(std::move(row));
    }
    return {{"elements", p.elements()}, {"leq", std::move(leq)}};
}

FinitePoset poset_from_json(const json& j) {
    auto elements = member(j, "elements").get<std::vector<std::string>>();
    const json& leq = member(j, "leq");
    if (!leq.is_array()) fail(ErrorKind::Structural, "\"leq\" must be a matrix or a list of pairs");
    // Either the full boolean matrix or generating pairs [lower, upper] by id.
    const bool pairs = leq.empty() || (leq[0].is_array() && !leq[0].empty() && leq[0][0].is_string());
    if (!pairs) return FinitePoset::make(std::move(elements), leq.get<std::vector<std::vector<bool>>>());
    std::vector<std::pair<std::size_t, std::size_t>> below;
    auto index = [&](const json& id) -> std::size_t {
        const auto name = id.get<std::string>();
        auto it = std::find(elements.begin(), elements.end(), name);
        if (it == elements.end()) fail(ErrorKind::Structural, "unknown poset element '" + name + "'");
        return static_cast<std::size_t>(it - elements.begin());
    };
    for (const auto& r : leq) {
        if (!r.is_array() || r.size() != 2) fail(ErrorKind::Structural, "order pair must be [lower, upper]");
        below.emplace_back(index(r[0]), index(r[1]));
    }
    return FinitePoset::from_relations(std::move(elements), below);
}

json to_json(const FinitePoset& p, const ClopenSet& s) {
    std::vector<std::string> members;
    for (std::size_t a = 0; a < p.size(); ++a)
        if (s.carrier[a]) members.push_back(p.element(a));
    return {{"term", s.term.to_string(p)}, {"members", members}};
}

Bits members_from_json(const FinitePoset& p, const json& j) {
    Bits b(p.size());
    for (const auto& id : j) b[p.index_of(id.get<std::string>())] = true;
    return b;
}

json to_json(const Spectrum& s) {
    json points = json::array();
    for (const auto& pt : s.points) {
        json bits = json::array();
        for (std::size_t g = 0; g < pt.assignment.size(); ++g) bits.push_back(pt.assignment[g] ? 1 : 0);
        points.push_back({{"assignment", std::move(bits)},
                          {"realized_by", pt.realized_by},
                          {"limits", pt.limits}});
    }
    return {{"generators", s.generators},
            {"points", std::move(points)},
            {"order", s.order},
            {"fingerprint", s.fingerprint},
            {"smallest_element", s.smallest_element ? json(*s.smallest_element) : json(nullptr)}};
}

// ---------------------------------------------------------------------------
// Operators

json to_json(const ExactOperator& op) {
    json entries = json::array();
    for (const auto& [k, v] : op.entries())
        entries.push_back({{"y", op.codomain().point(k.first)},
                           {"x", op.domain().point(k.second)},
                           {"re", to_json(v.re)},
                           {"im", to_json(v.im)}});
    return {{"rows", to_json(op.codomain())}, {"cols", to_json(op.domain())}, {"entries", std::move(entries)}};
}

ExactOperator operator_from_json(const json& j, const std::filesystem::path& base) {
    ExactOperator op(space_ref_from_json(member(j, "cols"), base),
                     space_ref_from_json(member(j, "rows"), base));
    for (const auto& e : member(j, "entries")) {
        const std::size_t y = point_index(op.codomain(), member(e, "y"));
        const std::size_t x = point_index(op.domain(), member(e, "x"));
        if (!op.at(y, x).is_zero()) fail(ErrorKind::Structural, "operator entry given twice");
        op.set(y, x, {rational_from_json(member(e, "re")),
                      e.contains("im") ? rational_from_json(e.at("im")) : Rational(0)});
    }
    return op;
}

json to_json(const PartialTranslation& t, const FiniteMetricSpace& domain,
             const FiniteMetricSpace& codomain) {
    json pairs = json::array();
    for (auto [x, z] : t.pairs) pairs.push_back({domain.point(x), codomain.point(z)});
    return {{"pairs", std::move(pairs)}, {"bound", to_json(t.bound)}};
}

PartialTranslation translation_from_json(const json& j, const FiniteMetricSpace& domain,
                                         const FiniteMetricSpace& codomain) {
    PartialTranslation t;
    for (const auto& p : member(j, "pairs")) {
        if (!p.is_array() || p.size() != 2) fail(ErrorKind::Structural, "translation pair must be [x, z]");
        t.pairs.emplace_back(point_index(domain, p[0]), point_index(codomain, p[1]));
    }
    std::sort(t.pairs.begin(), t.pairs.end());
    t.bound = rational_from_json(member(j, "bound"));
    return t;
}

json to_json(const Decomposition<ComplexRational>& d, const FiniteMetricSpace& domain,
             const FiniteMetricSpace& codomain) {
    json pieces = json::array();
    for (const auto& piece : d.pieces) {
        json coeff = json::object();
        for (auto [x, z] : piece.translation.pairs) coeff[domain.point(x)] = to_json(piece.coefficients[x]);
        pieces.push_back({{"translation", to_json(piece.translation, domain, codomain)},
                          {"coefficients", std::move(coeff)}});
    }
    return {{"pieces", std::move(pieces)},
            {"count", d.pieces.size()},
            {"column_degree", d.column_degree},
            {"row_degree", d.row_degree},
            {"degree_bound", d.column_degree * d.row_degree}};
}

json to_json(const Factorization& f, const FiniteMetricSpace& middle) {
    json pieces = json::array();
    for (std::size_t i = 0; i < f.first.size(); ++i)
        pieces.push_back({{"first", to_json(f.first[i])}, {"second", to_json(f.second[i])}});
    std::vector<std::string> mids;
    for (auto y : f.midpoint) mids.push_back(middle.point(y));
    return {{"composed", to_json(f.composed, middle)},
            {"pieces", std::move(pieces)},
            {"midpoints", mids},
            {"max_fiber", f.max_fiber},
            {"first_propagation", to_json(f.first_propagation)},
            {"second_propagation", to_json(f.second_propagation)}};
}

// ---------------------------------------------------------------------------
// Fields

json to_json(const TroFamily& f) {
    json gens = json::object();
    for (std::size_t a = 0; a < f.poset().size(); ++a) {
        json list = json::array();
        for (const auto& g : f.generators(a)) list.push_back(to_json(g));
        gens[f.poset().element(a)] = std::move(list);
    }
    return {{"poset", to_json(f.poset())}, {"rows", f.rows()}, {"cols", f.cols()}, {"generators", std::move(gens)}};
}

TroFamily family_from_json(const json& j) {
    FinitePoset p = poset_from_json(member(j, "poset"));
    const auto rows = member(j, "rows").get<std::size_t>();
    const auto cols = member(j, "cols").get<std::size_t>();
    std::vector<std::vector<ExactMatrix>> gens(p.size());
    for (const auto& [id, list] : member(j, "generators").items())
        for (const auto& g : list) gens[p.index_of(id)].push_back(exact_matrix_from_json(g));
    return TroFamily::make(std::move(p), rows, cols, std::move(gens));
}

json to_json(const PosetFieldElement& m, const FinitePoset& p) {
    json terms = json::array();
    for (const auto& t : m.terms()) {
        std::vector<std::string> mono;
        for (auto a : t.monomial) mono.push_back(p.element(a));
        terms.push_back({{"monomial", mono}, {"value", to_json(t.value)}});
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"terms", std::move(terms)}};
}

PosetFieldElement field_element_from_json(const json& j, const TroFamily& family) {
    const FinitePoset& p = family.poset();
    PosetFieldElement m(member(j, "rows").get<std::size_t>(), member(j, "cols").get<std::size_t>());
    for (const auto& t : member(j, "terms")) {
        const auto mono = member(t, "monomial").get<std::vector<std::string>>();
        if (mono.empty()) fail(ErrorKind::Structural, "field term needs at least one indicator");
        const std::size_t head = p.index_of(mono.front());
        PosetFieldElement term =
            m.rows() == family.rows() && m.cols() == family.cols()
                ? PosetFieldElement::generator(family, head, exact_matrix_from_json(member(t, "value")))
                : PosetFieldElement::generator(m.rows() == family.rows() ? family.left_algebra()
                                                                         : family.right_algebra(),
                                               head, exact_matrix_from_json(member(t, "value")));
        for (std::size_t k = 1; k < mono.size(); ++k) term = term.times_indicator(p.index_of(mono[k]));
        m += term;
    }
    return m;
}

json to_json(const AxiomReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"instances", c.instances}, {"detail", c.detail}});
    return {{"passed", r.passed()}, {"checks", std::move(checks)}};
}

json to_json(const GridField& f) {
    json grid = json::array(), values = json::array();
    for (const auto& t : f.grid) grid.push_back(to_json(t));
    for (const auto& v : f.values) values.push_back(to_json(v));
    return {{"grid", std::move(grid)}, {"values", std::move(values)}, {"modulus", to_json(f.modulus)}};
}

GridField grid_field_from_json(const json& j) {
    std::vector<Rational> grid;
    std::vector<ComplexMatrix> values;
    for (const auto& t : member(j, "grid")) grid.push_back(rational_from_json(t));
    for (const auto& v : member(j, "values")) values.push_back(complex_matrix_from_json(v));
    return GridField::make(std::move(grid), std::move(values), rational_from_json(member(j, "modulus")));
}

json to_json(const GridInterval& i) { return json::array({i.lo, i.hi}); }

// ---------------------------------------------------------------------------
// Block matrices

json to_json(const BlockClassMatrix& m) {
    json entries = json::array();
    for (const auto& [pos, cls] : m.entries())
        entries.push_back({{"i", pos.first}, {"j", pos.second}, {"class", cls}});
    json out = {{"entries", std::move(entries)}, {"infinite_diagonal", m.infinite_diagonal()}};
    if (!(m.entry_poset() == default_entry_poset())) out["entry_poset"] = to_json(m.entry_poset());
    return out;
}

BlockClassMatrix block_from_json(const json& j) {
    FinitePoset p = j.contains("entry_poset") ? poset_from_json(j.at("entry_poset")) : default_entry_poset();
    std::vector<std::pair<BlockClassMatrix::Position, std::string>> entries;
    for (const auto& e : member(j, "entries"))
        entries.push_back({{member(e, "i").get<BlockClassMatrix::Index>(), member(e, "j").get<BlockClassMatrix::Index>()},
                           member(e, "class").get<std::string>()});
    const bool infinite = j.contains("infinite_diagonal") && j.at("infinite_diagonal").get<bool>();
    return BlockClassMatrix::make(std::move(p), entries, infinite);
}

json to_json(const OrderProbe& p) {
    return {{"left", p.left}, {"right", p.right}, {"verdict", to_string(p.verdict)}, {"reason", p.reason}};
}

json to_json(const CoronaEvaluation& e) {
    json probes = json::array();
    for (const auto& p : e.probes) probes.push_back(to_json(p));
    return {{"value", e.value ? 1 : 0}, {"N", e.stable_after}, {"probes", std::move(probes)}};
}

}  // namespace coarsefield::io
