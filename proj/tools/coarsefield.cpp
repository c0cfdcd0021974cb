// coarsefield: command-line front end to the library.
//
// Every command prints one JSON report on standard output. Exit codes:
// 0 success, 1 invariant violation, 2 usage or malformed input, 3 inconclusive.

#include "coarsefield/block.hpp"
#include "coarsefield/error.hpp"
#include "coarsefield/field.hpp"
#include "coarsefield/grid.hpp"
#include "coarsefield/hermitian.hpp"
#include "coarsefield/io.hpp"
#include "coarsefield/metric.hpp"
#include "coarsefield/poset.hpp"
#include "coarsefield/random.hpp"
#include "coarsefield/roe.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace coarsefield;
using io::json;
using io::to_json;

namespace {

struct Outcome {
    json report;
    int code = 0;
    std::optional<json> artifact;        ///< written by --out when present
    std::optional<std::string> text;     ///< DOT output
};

struct Command {
    std::string name;
    std::function<Outcome()> run;
};

fs::path dir_of(const std::string& path) { return fs::path(path).parent_path(); }

FiniteMetricSpace load_space(const std::string& path) {
    return io::space_from_json(io::read_json_file(path));
}

GluedMetric load_glue(const std::string& path) {
    return io::glue_from_json(io::read_json_file(path), dir_of(path));
}

FinitePoset load_poset(const std::string& path) { return io::poset_from_json(io::read_json_file(path)); }

BlockClassMatrix load_block(const std::string& path) {
    return io::block_from_json(io::read_json_file(path));
}

std::vector<std::string> split_ids(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::size_t> poset_indices(const FinitePoset& p, const std::string& list) {
    std::vector<std::size_t> out;
    if (list == "all") {
        for (std::size_t a = 0; a < p.size(); ++a) out.push_back(a);
        return out;
    }
    for (const auto& id : split_ids(list)) out.push_back(p.index_of(id));
    return out;
}

Rational parse_rational(const std::string& s) {
    try {
        Rational q(s);
        q.canonicalize();
        if (q.get_den() == 0) throw std::invalid_argument(s);
        return q;
    } catch (const std::exception&) {
        fail(ErrorKind::Structural, "not a rational number: " + s);
    }
}

// Space families for family-level comparison:
//   "half_line" | {"axis_union": k} | inline finite space
SpaceFamily family_space(const json& j, const fs::path& base) {
    if (j.is_string() && j.get<std::string>() == "half_line") return SpaceFamily::half_line();
    if (j.is_object() && j.contains("axis_union")) return SpaceFamily::axis_union(j.at("axis_union").get<int>());
    return SpaceFamily::explicit_space(io::space_ref_from_json(j, base));
}

// {"family":"smallest","left":S,"right":S}
// {"family":"shifted_diagonal","space":S,"shift":q}
// {"family":"axis_bridge","axes":k,"sigma":[...]}
GlueFamily load_family(const json& j, const fs::path& base) {
    const std::string kind = j.at("family").get<std::string>();
    if (kind == "smallest") return smallest_family(family_space(j.at("left"), base), family_space(j.at("right"), base));
    if (kind == "shifted_diagonal")
        return shifted_diagonal_family(family_space(j.at("space"), base), io::rational_from_json(j.at("shift")));
    if (kind == "axis_bridge")
        return axis_bridge_family(j.at("axes").get<int>(), j.at("sigma").get<std::vector<int>>());
    fail(ErrorKind::Structural, "unknown glue family \"" + kind + "\"");
}

json status(bool ok) { return ok ? "pass" : "fail"; }

json translation_json(const PartialTranslation& t, const FiniteMetricSpace& x, const FiniteMetricSpace& z) {
    return to_json(t, x, z);
}

// ---------------------------------------------------------------------------

void add_metric(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* metric = app.add_subcommand("metric", "glued metrics on X ⊔ Y")->require_subcommand(1);
    {
        auto* sub = metric->add_subcommand("validate", "check the metric or glue axioms");
        static std::string space, glue;
        static std::vector<std::string> radii;
        sub->add_option("--space", space, "finite metric space JSON");
        sub->add_option("--glue", glue, "glued metric JSON");
        sub->add_option("--radius", radii, "radii for the ball-size profile");
        sub->require_option(1, 3);
        commands.push_back({"metric validate", [] {
            Outcome o;
            if (!space.empty()) {
                std::vector<Rational> rs;
                for (const auto& r : radii) rs.push_back(parse_rational(r));
                const ValidationReport r = validate_metric(load_space(space), rs);
                o.report = to_json(r);
                o.report["check"] = "metric axioms";
                o.report["status"] = status(r.passed);
                o.code = r.passed ? 0 : 1;
            } else if (!glue.empty()) {
                const json j = io::read_json_file(glue);
                const auto left = io::space_ref_from_json(j.at("left"), dir_of(glue));
                const auto right = io::space_ref_from_json(j.at("right"), dir_of(glue));
                RationalMatrix cross(left.size(), right.size());
                const json& c = j.at("cross");
                if (c.size() != left.size()) fail(ErrorKind::Structural, "cross table shape");
                for (std::size_t x = 0; x < left.size(); ++x) {
                    if (c[x].size() != right.size()) fail(ErrorKind::Structural, "cross table shape");
                    for (std::size_t y = 0; y < right.size(); ++y) cross(x, y) = io::rational_from_json(c[x][y]);
                }
                const auto v = check_glue(left, right, cross);
                o.report = {{"check", "glue axioms"}, {"status", status(!v)}};
                if (v)
                    o.report["violation"] = {{"property", v->property}, {"points", v->points}, {"detail", v->detail}};
                o.code = v ? 1 : 0;
            } else {
                fail(ErrorKind::Structural, "give --space or --glue");
            }
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = metric->add_subcommand("glue", "build a glued metric from two spaces and a cross table");
        static std::string left, right, cross;
        sub->add_option("--left", left)->required();
        sub->add_option("--right", right)->required();
        sub->add_option("--cross", cross, "JSON file holding the cross table (or {\"cross\": table})")->required();
        commands.push_back({"metric glue", [] {
            json c = io::read_json_file(cross);
            if (c.is_object()) c = c.at("cross");
            const json doc = {{"left", fs::absolute(left).string()},
                               {"right", fs::absolute(right).string()},
                               {"cross", c}};
            const GluedMetric d = io::glue_from_json(doc);
            Outcome o;
            o.artifact = to_json(d);
            o.report = {{"check", "glue axioms"}, {"status", "pass"}, {"gap", to_json(d.gap())}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = metric->add_subcommand("compose", "min-plus composition of two glues");
        static std::string left, right;
        sub->add_option("--left", left, "glue over (X, Y)")->required();
        sub->add_option("--right", right, "glue over (Y, Z)")->required();
        commands.push_back({"metric compose", [] {
            const GluedMetric d1 = load_glue(left), d2 = load_glue(right);
            const Composition c = compose(d1, d2);
            Outcome o;
            o.artifact = to_json(c, d1.right());
            o.report = {{"check", "min-plus composition"}, {"status", "pass"}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = metric->add_subcommand("derive", "adjoint glue and the two induced metrics");
        static std::string glue;
        sub->add_option("--glue", glue)->required();
        commands.push_back({"metric derive", [] {
            const DerivedMetrics dm = derived_metrics(load_glue(glue));
            Outcome o;
            o.artifact = json{{"adjoint", to_json(dm.adjoint)},
                              {"induced_on_left", to_json(dm.induced_on_left)},
                              {"induced_on_right", to_json(dm.induced_on_right)}};
            o.report = {{"check", "derived metrics"}, {"status", "pass"}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = metric->add_subcommand("smallest", "the smallest glue through the basepoints");
        static std::string left, right, lbase, rbase;
        sub->add_option("--left", left)->required();
        sub->add_option("--right", right)->required();
        sub->add_option("--left-base", lbase);
        sub->add_option("--right-base", rbase);
        commands.push_back({"metric smallest", [] {
            auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };
            const GluedMetric d = smallest_metric(load_space(left), load_space(right), opt(lbase), opt(rbase));
            Outcome o;
            o.artifact = to_json(d);
            o.report = {{"check", "smallest glue"}, {"status", "pass"}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = metric->add_subcommand("compare", "coarse comparison by control-function certificates");
        static std::string first, second, radius = "16", window;
        sub->add_option("--first", first)->required();
        sub->add_option("--second", second)->required();
        sub->add_option("--radius", radius, "truncation radius for glue families");
        sub->add_option("--window", window, "comparison window (default radius / 2)");
        commands.push_back({"metric compare", [] {
            const json a = io::read_json_file(first), b = io::read_json_file(second);
            CoarseComparison c;
            if (a.contains("family") || b.contains("family")) {
                if (!a.contains("family") || !b.contains("family"))
                    fail(ErrorKind::Structural, "compare two glue families or two finite glues");
                std::optional<Rational> w;
                if (!window.empty()) w = parse_rational(window);
                c = control_compare(load_family(a, dir_of(first)), load_family(b, dir_of(second)),
                                    parse_rational(radius), w);
            } else {
                c = control_compare(io::glue_from_json(a, dir_of(first)), io::glue_from_json(b, dir_of(second)));
            }
            Outcome o;
            o.report = to_json(c);
            o.report["check"] = "coarse order by control functions";
            o.report["status"] = c.verdict == CoarseVerdict::Inconclusive ? "inconclusive" : "pass";
            o.code = c.verdict == CoarseVerdict::Inconclusive ? 3 : 0;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
}

void add_topology(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* top = app.add_subcommand("topology", "clopen subbase topology on a poset")->require_subcommand(1);
    {
        auto* sub = top->add_subcommand("subbase", "list the subbase sets U_a and V_a");
        static std::string poset;
        sub->add_option("--poset", poset)->required();
        commands.push_back({"topology subbase", [] {
            const FinitePoset p = load_poset(poset);
            json sets = json::array();
            for (const auto& s : subbase_sets(p)) sets.push_back(to_json(p, s));
            Outcome o;
            o.report = {{"check", "subbase"}, {"status", "pass"}, {"sets", sets}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = top->add_subcommand("separate", "disjoint clopen neighbourhoods of two points");
        static std::string poset, a, b;
        sub->add_option("--poset", poset)->required();
        sub->add_option("--a", a)->required();
        sub->add_option("--b", b)->required();
        commands.push_back({"topology separate", [] {
            const FinitePoset p = load_poset(poset);
            const auto [u, v] = hausdorff_witness(p, p.index_of(a), p.index_of(b));
            Outcome o;
            o.report = {{"check", "Hausdorff separation"}, {"status", "pass"},
                        {"around_a", to_json(p, u)}, {"around_b", to_json(p, v)}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = top->add_subcommand("urysohn", "clopen indicator separating a point from a closed set");
        static std::string poset, closed, point;
        sub->add_option("--poset", poset)->required();
        sub->add_option("--closed", closed, "comma-separated element ids")->required();
        sub->add_option("--point", point)->required();
        commands.push_back({"topology urysohn", [] {
            const FinitePoset p = load_poset(poset);
            const json ids = split_ids(closed);
            const UrysohnResult r = urysohn_function(p, io::members_from_json(p, ids), p.index_of(point));
            Outcome o;
            o.report = {{"check", "Urysohn function"}, {"status", status(r.continuous)},
                        {"set", to_json(p, r.set)}, {"continuous", r.continuous}};
            o.code = r.continuous ? 0 : 1;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = top->add_subcommand("refute-cover", "find a minimal element missed by a candidate subcover");
        static std::string poset, cover, minimals = "all";
        sub->add_option("--poset", poset)->required();
        sub->add_option("--cover", cover, "comma-separated elements a whose U_a form the candidate")->required();
        sub->add_option("--minimals", minimals, "comma-separated minimal elements to cover (default: all)");
        commands.push_back({"topology refute-cover", [] {
            const FinitePoset p = load_poset(poset);
            std::vector<std::size_t> mins =
                minimals == "all" ? p.minimal_elements() : poset_indices(p, minimals);
            const auto missed = refute_subcover(p, mins, poset_indices(p, cover));
            Outcome o;
            o.report = {{"check", "finite subcover of the minimal neighbourhoods"},
                        {"status", "pass"},
                        {"covers", !missed.has_value()},
                        {"missed", missed ? json(p.element(*missed)) : json(nullptr)}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = top->add_subcommand("spectrum", "points of the spectrum of a generated algebra");
        static std::string poset, generators = "all", universe = "all";
        sub->add_option("--poset", poset)->required();
        sub->add_option("--generators", generators, "'all' or comma-separated ids");
        sub->add_option("--universe", universe, "'all' or comma-separated ids");
        commands.push_back({"topology spectrum", [] {
            const FinitePoset p = load_poset(poset);
            const auto alg = GeneratedAlgebra::from_poset(p, poset_indices(p, generators), poset_indices(p, universe));
            const Spectrum s = gamma_spectrum(alg);
            Outcome o;
            o.report = to_json(s);
            o.report["check"] = "spectrum of the generated algebra";
            o.report["status"] = "pass";
            o.report["count"] = s.points.size();
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
}

void add_roe(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* roe = app.add_subcommand("roe", "banded operators between glued spaces")->require_subcommand(1);
    {
        auto* sub = roe->add_subcommand("prop", "propagation of an operator");
        static std::string op, glue;
        sub->add_option("--op", op)->required();
        sub->add_option("--glue", glue, "glue over (domain, codomain); omit for an operator on one space");
        commands.push_back({"roe prop", [] {
            const ExactOperator t = io::operator_from_json(io::read_json_file(op), dir_of(op));
            Rational r;
            if (!glue.empty()) {
                r = propagation(t, load_glue(glue));
            } else {
                if (!(t.domain() == t.codomain()))
                    fail(ErrorKind::Structural, "an operator between different spaces needs --glue");
                r = propagation(t, t.domain());
            }
            Outcome o;
            o.report = {{"check", "propagation"}, {"status", "pass"}, {"propagation", to_json(r)},
                        {"column_degree", t.column_degree()}, {"row_degree", t.row_degree()}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = roe->add_subcommand("tro", "T S* R and its propagation bound");
        static std::string t, s, r, glue;
        sub->add_option("--t", t)->required();
        sub->add_option("--s", s)->required();
        sub->add_option("--r", r)->required();
        sub->add_option("--glue", glue)->required();
        commands.push_back({"roe tro", [] {
            auto ld = [](const std::string& f) { return io::operator_from_json(io::read_json_file(f), dir_of(f)); };
            const TroProduct p = tro_triple(ld(t), ld(s), ld(r), load_glue(glue));
            const bool ok = p.propagation <= p.bound;
            Outcome o;
            o.artifact = to_json(p.product);
            o.report = {{"check", "ternary product stays banded"}, {"status", status(ok)},
                        {"propagation", to_json(p.propagation)}, {"bound", to_json(p.bound)},
                        {"result", *o.artifact}};
            o.code = ok ? 0 : 1;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = roe->add_subcommand("decompose", "split an operator into weighted partial translations");
        static std::string op, glue, max_prop;
        sub->add_option("--op", op)->required();
        sub->add_option("--glue", glue)->required();
        sub->add_option("--max-prop", max_prop, "propagation bound (default: the operator's own)");
        commands.push_back({"roe decompose", [] {
            const ExactOperator t = io::operator_from_json(io::read_json_file(op), dir_of(op));
            const GluedMetric d = load_glue(glue);
            const Rational bound = max_prop.empty() ? propagation(t, d) : parse_rational(max_prop);
            const auto dec = decompose(t, d, bound);
            const bool exact = reconstruct(dec, t.domain(), t.codomain()) == t;
            Outcome o;
            o.artifact = to_json(dec, t.domain(), t.codomain());
            o.report = {{"check", "decomposition into partial translations"}, {"status", status(exact)},
                        {"reconstructs", exact}, {"result", *o.artifact}};
            o.code = exact ? 0 : 1;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = roe->add_subcommand("factor", "factor a partial translation through the middle space");
        static std::string translation, first, second;
        sub->add_option("--translation", translation, "{\"pairs\": [[x, z], ...]}")->required();
        sub->add_option("--first", first, "glue over (X, Y)")->required();
        sub->add_option("--second", second, "glue over (Y, Z)")->required();
        commands.push_back({"roe factor", [] {
            const GluedMetric d1 = load_glue(first), d2 = load_glue(second);
            const json j = io::read_json_file(translation);
            PartialTranslation raw = io::translation_from_json(
                j.contains("bound") ? j : json{{"pairs", j.at("pairs")}, {"bound", 0}}, d1.left(), d2.right());
            const Composition c = compose(d1, d2);
            PartialTranslation t = PartialTranslation::tight(raw.pairs, c.metric);
            if (j.contains("bound")) {
                if (raw.bound < t.bound)
                    fail(ErrorKind::Precondition, "declared bound is below the largest displacement");
                t.bound = raw.bound;
            }
            const Factorization f = factor_through(t, d1, d2);
            Outcome o;
            o.artifact = to_json(f, d1.right());
            o.report = {{"check", "factorization through the composed glue"}, {"status", "pass"},
                        {"translation", translation_json(t, d1.left(), d2.right())},
                        {"pieces", f.first.size()}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
}

void add_field(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* field = app.add_subcommand("field", "continuous fields of bimodules")->require_subcommand(1);
    {
        auto* sub = field->add_subcommand("eval", "value of a poset field element at a point");
        static std::string family, element, at, assignment, generators;
        sub->add_option("--family", family)->required();
        sub->add_option("--element", element)->required();
        sub->add_option("--at", at, "poset element id");
        sub->add_option("--assignment", assignment, "spectrum point as 0/1 per generator, e.g. 1,0,1");
        sub->add_option("--generators", generators, "generator ids for --assignment (default: all)");
        commands.push_back({"field eval", [] {
            const TroFamily f = io::family_from_json(io::read_json_file(family));
            const PosetFieldElement m = io::field_element_from_json(io::read_json_file(element), f);
            const FinitePoset& p = f.poset();
            ExactMatrix value;
            if (!at.empty()) {
                value = m.evaluate(p, p.index_of(at));
            } else if (!assignment.empty()) {
                std::vector<std::string> gens = generators.empty() || generators == "all" ? p.elements() : split_ids(generators);
                const auto bits = split_ids(assignment);
                if (bits.size() != gens.size()) fail(ErrorKind::Structural, "one 0/1 value per generator is required");
                SpectrumPoint pt;
                pt.assignment = Bits(gens.size());
                for (std::size_t g = 0; g < bits.size(); ++g) {
                    if (bits[g] != "0" && bits[g] != "1") fail(ErrorKind::Structural, "assignment values are 0 or 1");
                    pt.assignment[g] = bits[g] == "1";
                }
                value = m.evaluate(p, gens, pt);
            } else {
                fail(ErrorKind::Structural, "give --at or --assignment");
            }
            Outcome o;
            o.report = {{"check", "evaluation"}, {"status", "pass"}, {"value", to_json(value)},
                        {"norm", operator_norm(to_complex(value))}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = field->add_subcommand("axioms", "check the field axioms on random elements");
        static std::string family;
        static std::uint64_t seed = 1;
        static std::size_t samples = 4;
        sub->add_option("--family", family)->required();
        sub->add_option("--seed", seed);
        sub->add_option("--samples", samples);
        commands.push_back({"field axioms", [] {
            const TroFamily f = io::family_from_json(io::read_json_file(family));
            Rng rng(seed);
            FieldSample s;
            const TroFamily left = f.left_algebra(), right = f.right_algebra();
            for (std::size_t k = 0; k < samples; ++k) {
                s.module.push_back(random_field_element(rng, f));
                s.left_algebra.push_back(random_field_element(rng, left));
                s.right_algebra.push_back(random_field_element(rng, right));
            }
            for (std::size_t a = 0; a < f.poset().size(); ++a) s.points.push_back(a);
            const AxiomReport r = check_field_axioms(f, s);
            Outcome o;
            o.report = to_json(r);
            o.report["check"] = "field axioms";
            o.report["status"] = status(r.passed());
            o.report["seed"] = seed;
            o.code = r.passed() ? 0 : 1;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = field->add_subcommand("stabilize", "correct a grid field to projection Gram values near t0");
        static std::string input;
        static std::size_t anchor = 0;
        static double eps = 1e-2;
        sub->add_option("--field", input)->required();
        sub->add_option("--anchor", anchor, "grid index t0")->required();
        sub->add_option("--eps", eps);
        commands.push_back({"field stabilize", [] {
            const StabilizeResult r = stabilize_projection(io::grid_field_from_json(io::read_json_file(input)), anchor, eps);
            Outcome o;
            o.artifact = to_json(r.field);
            o.report = {{"check", "projection stabilization"}, {"status", "pass"},
                        {"projection_interval", to_json(r.projection)},
                        {"corrected_interval", to_json(r.corrected)},
                        {"defect", r.defect}, {"deviation", r.deviation},
                        {"idempotency", r.idempotency}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = field->add_subcommand("orthogonalize", "make two grid fields orthogonal near t0");
        static std::string first, second;
        static std::size_t anchor = 0;
        static double eps = 1e-2;
        sub->add_option("--first", first)->required();
        sub->add_option("--second", second)->required();
        sub->add_option("--anchor", anchor)->required();
        sub->add_option("--eps", eps);
        commands.push_back({"field orthogonalize", [] {
            const OrthogonalizeResult r =
                orthogonalize_pair(io::grid_field_from_json(io::read_json_file(first)),
                                   io::grid_field_from_json(io::read_json_file(second)), anchor, eps);
            Outcome o;
            o.artifact = json{{"first", to_json(r.first)}, {"second", to_json(r.second)}};
            o.report = {{"check", "orthogonalization"}, {"status", "pass"}, {"interval", to_json(r.interval)},
                        {"cross", r.cross}, {"defect", r.defect}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = field->add_subcommand("frame", "extend an orthonormal frame off t0");
        static std::vector<std::string> frame;
        static std::size_t anchor = 0;
        static double eps = 1e-2;
        sub->add_option("--frame", frame, "grid field files, in order")->required();
        sub->add_option("--anchor", anchor)->required();
        sub->add_option("--eps", eps);
        commands.push_back({"field frame", [] {
            std::vector<GridField> fs;
            for (const auto& f : frame) fs.push_back(io::grid_field_from_json(io::read_json_file(f)));
            const FrameResult r = frame_extend(fs, anchor, eps);
            Outcome o;
            json out = json::array();
            for (const auto& e : r.frame) out.push_back(to_json(e));
            o.artifact = out;
            o.report = {{"check", "frame extension"}, {"status", "pass"}, {"interval", to_json(r.interval)},
                        {"gram_error", r.gram_error}, {"idempotency", r.idempotency}, {"result", out}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
}

void add_corona(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* corona = app.add_subcommand("corona", "block-class matrices and the diagonal sequence b_k")->require_subcommand(1);
    {
        auto* sub = corona->add_subcommand("validate", "at most one non-zero entry per row and column");
        static std::string matrix;
        sub->add_option("--matrix", matrix)->required();
        commands.push_back({"corona validate", [] {
            const auto v = validate_block_matrix(load_block(matrix));
            Outcome o;
            o.report = {{"check", "block matrix shape"}, {"status", status(!v)}};
            if (v) {
                json entries = json::array();
                for (auto [i, j] : v->entries) entries.push_back({i, j});
                o.report["violation"] = {{"line", v->line}, {"index", v->index}, {"entries", entries}};
            }
            o.code = v ? 1 : 0;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = corona->add_subcommand("bseq", "the diagonal matrix b_k");
        static BlockClassMatrix::Index k = 1;
        sub->add_option("--k", k)->required();
        commands.push_back({"corona bseq", [] {
            Outcome o;
            o.artifact = to_json(b_sequence(k));
            o.report = {{"check", "diagonal sequence"}, {"status", "pass"}, {"result", *o.artifact}};
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = corona->add_subcommand("leq", "three-valued order probe");
        static std::string left, right;
        sub->add_option("--left", left)->required();
        sub->add_option("--right", right)->required();
        commands.push_back({"corona leq", [] {
            const OrderProbe p = family_leq(load_block(left), load_block(right));
            Outcome o;
            o.report = to_json(p);
            o.report["check"] = "glue-class order";
            o.report["status"] = p.verdict == FamilyVerdict::Inconclusive ? "inconclusive" : "pass";
            o.code = p.verdict == FamilyVerdict::Inconclusive ? 3 : 0;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = corona->add_subcommand("phi", "eventual value of chi_a along b_n");
        static std::string matrix, with;
        static BlockClassMatrix::Index margin = 16;
        sub->add_option("--matrix", matrix)->required();
        sub->add_option("--with", with, "second matrix b: evaluate chi_a chi_b");
        sub->add_option("--margin", margin, "probes beyond the stabilization index");
        commands.push_back({"corona phi", [] {
            const BlockClassMatrix a = load_block(matrix);
            const CoronaEvaluation e = with.empty() ? corona_phi(a, margin)
                                                    : corona_phi_joint(a, load_block(with), margin);
            Outcome o;
            o.report = to_json(e);
            o.report["check"] = "corona functional";
            o.report["status"] = "pass";
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = corona->add_subcommand("refute", "neighbourhood of a candidate holding only finitely many b_k");
        static std::string matrix;
        static BlockClassMatrix::Index margin = 16;
        sub->add_option("--matrix", matrix)->required();
        sub->add_option("--margin", margin);
        commands.push_back({"corona refute", [] {
            const AccumulationRefutation r = refute_accumulation(load_block(matrix), margin);
            Outcome o;
            json probes = json::array();
            for (const auto& p : r.probes) probes.push_back(to_json(p));
            o.report = {{"check", "b_k does not accumulate at the candidate"},
                        {"status", r.separator ? "pass" : "inconclusive"},
                        {"k0", r.k0 ? json(*r.k0) : json(nullptr)},
                        {"separator", r.separator ? to_json(*r.separator) : json(nullptr)},
                        {"neighbourhood", r.neighbourhood},
                        {"members", r.members},
                        {"exceptions", r.exceptions},
                        {"probes", probes}};
            o.code = r.separator ? 0 : 3;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
    {
        auto* sub = corona->add_subcommand("escape", "a witness that the corona functional is not evaluation at b");
        static std::string matrix;
        static BlockClassMatrix::Index margin = 16;
        sub->add_option("--matrix", matrix)->required();
        sub->add_option("--margin", margin);
        commands.push_back({"corona escape", [] {
            const EscapeWitness w = corona_escape_witness(load_block(matrix), margin);
            const bool ok = w.phi != w.value_at_b;
            Outcome o;
            o.report = {{"check", "corona functional differs from point evaluation"}, {"status", status(ok)},
                        {"a", to_json(w.a)}, {"phi", w.phi ? 1 : 0}, {"value_at_b", w.value_at_b ? 1 : 0},
                        {"branch", w.branch}};
            o.code = ok ? 0 : 1;
            return o;
        }});
        sub->callback([&chosen, sub] { chosen = sub; });
    }
}

void add_export(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* exp = app.add_subcommand("export", "Graphviz exports")->require_subcommand(1);
    auto* sub = exp->add_subcommand("dot", "Hasse diagram of a poset or support graph of an operator");
    static std::string poset, op, sets = "subbase";
    sub->add_option("--poset", poset);
    sub->add_option("--op", op);
    sub->add_option("--sets", sets, "colour classes for the Hasse diagram: 'subbase' or 'none'");
    sub->require_option(1, 2);
    commands.push_back({"export dot", [] {
        Outcome o;
        if (!poset.empty()) {
            const FinitePoset p = load_poset(poset);
            o.text = hasse_dot(p, sets == "none" ? std::vector<ClopenSet>{} : subbase_sets(p));
        } else if (!op.empty()) {
            o.text = support_dot(io::operator_from_json(io::read_json_file(op), dir_of(op)));
        } else {
            fail(ErrorKind::Structural, "give --poset or --op");
        }
        o.report = {{"check", "dot export"}, {"status", "pass"}, {"dot", *o.text}};
        return o;
    }});
    sub->callback([&chosen, sub] { chosen = sub; });
}

// Randomized invariant sweep; deterministic for a given seed.
void add_selftest(CLI::App& app, std::vector<Command>& commands, CLI::App*& chosen) {
    auto* sub = app.add_subcommand("selftest", "randomized invariant checks");
    static std::uint64_t seed = 1;
    static int rounds = 20;
    sub->add_option("--seed", seed);
    sub->add_option("--rounds", rounds);
    commands.push_back({"selftest", [] {
        Rng rng(seed);
        json checks = json::object();
        auto count = [&](const std::string& name, bool ok) {
            auto& c = checks[name];
            if (c.is_null()) c = {{"passed", 0}, {"failed", 0}};
            c[ok ? "passed" : "failed"] = c[ok ? "passed" : "failed"].get<int>() + 1;
        };
        for (int r = 0; r < rounds; ++r) {
            const auto x = random_metric_space(rng, uniform_int(rng, 1, 5), "x");
            const auto y = random_metric_space(rng, uniform_int(rng, 1, 5), "y");
            const auto z = random_metric_space(rng, uniform_int(rng, 1, 5), "z");
            const GluedMetric d1 = random_glue(rng, x, y), d2 = random_glue(rng, y, z);
            const Composition c = compose(d1, d2);
            count("composition is a glue", !check_glue(c.metric.left(), c.metric.right(), c.metric.cross()));
            count("smallest glue lies below",
                  ControlFunction::tightest(smallest_metric(x, y), d1).certifies(smallest_metric(x, y), d1));

            const ExactOperator t = random_banded(rng, d1, Rational(4), 2);
            const auto dec = decompose(t, d1, propagation(t, d1));
            count("decomposition reconstructs", reconstruct(dec, t.domain(), t.codomain()) == t);

            const FinitePoset p = random_poset(rng, uniform_int(rng, 1, 6));
            bool sep = true;
            for (std::size_t a = 0; a < p.size(); ++a)
                for (std::size_t b = 0; b < p.size(); ++b)
                    if (a != b) {
                        const auto [u, v] = hausdorff_witness(p, a, b);
                        sep = sep && u.carrier[a] && v.carrier[b] && !(u.carrier & v.carrier).any();
                    }
            count("Hausdorff separation", sep);

            const TroFamily f = random_field_family(rng, uniform_int(rng, 1, 4), 2, 3);
            FieldSample s;
            s.module = {random_field_element(rng, f)};
            s.left_algebra = {random_field_element(rng, f.left_algebra())};
            s.right_algebra = {random_field_element(rng, f.right_algebra())};
            for (std::size_t a = 0; a < f.poset().size(); ++a) s.points.push_back(a);
            count("field axioms", check_field_axioms(f, s).passed());

            const auto pm = random_partial_permutation(rng, uniform_int(rng, 1, 6));
            count("partial permutations are valid block matrices", !validate_block_matrix(pm));
        }
        bool ok = true;
        for (const auto& [name, c] : checks.items()) ok = ok && c["failed"].get<int>() == 0;
        Outcome o;
        o.report = {{"check", "randomized invariants"}, {"status", status(ok)}, {"seed", seed},
                    {"rounds", rounds}, {"checks", checks}};
        o.code = ok ? 0 : 1;
        return o;
    }});
    sub->callback([&chosen, sub] { chosen = sub; });
}

std::string command_path(const CLI::App* app) {
    std::string name;
    for (const CLI::App* a = app; a && a->get_parent(); a = a->get_parent())
        name = name.empty() ? a->get_name() : a->get_name() + " " + name;
    return name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarsefield: glued metrics, clopen topologies, banded operators and continuous fields"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out, format = "json";
    app.add_option("--out", out, "write the result (or the report) atomically to this file");
    app.add_option("--format", format, "report format on standard output")->check(CLI::IsMember({"json", "text"}));

    std::vector<Command> commands;
    CLI::App* chosen = nullptr;
    add_metric(app, commands, chosen);
    add_topology(app, commands, chosen);
    add_roe(app, commands, chosen);
    add_field(app, commands, chosen);
    add_corona(app, commands, chosen);
    add_export(app, commands, chosen);
    add_selftest(app, commands, chosen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string name = command_path(chosen);
    const auto it = std::find_if(commands.begin(), commands.end(), [&](const Command& c) { return c.name == name; });
    if (it == commands.end()) {
        std::cerr << "unknown command: " << name << "\n";
        return 2;
    }

    Outcome o;
    try {
        o = it->run();
    } catch (const Error& e) {
        o.report = {{"status", "error"}, {"error", to_string(e.kind())}, {"message", e.what()}, {"detail", e.detail()}};
        if (e.kind() == ErrorKind::Inconclusive) o.report["status"] = "inconclusive";
        if (e.kind() == ErrorKind::Rejected) o.report["status"] = "fail";
        o.code = exit_code(e.kind());
        std::cerr << name << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    } catch (const json::exception& e) {
        o.report = {{"status", "error"}, {"error", "structural"}, {"message", e.what()}};
        o.code = 2;
        std::cerr << name << ": malformed input: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        o.report = {{"status", "error"}, {"error", "structural"}, {"message", e.what()}};
        o.code = 2;
        std::cerr << name << ": " << e.what() << "\n";
    }
    o.report["command"] = name;

    try {
        if (!out.empty() && o.report["status"] != "error") {
            if (o.text)
                io::write_text_atomic(out, *o.text);
            else
                io::write_json_atomic(out, o.artifact ? *o.artifact : o.report);
        }
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return 2;
    }

    if (format == "text") {
        std::cout << name << ": " << o.report["status"].get<std::string>();
        for (const char* key : {"check", "verdict", "value", "N", "count", "propagation", "message"})
            if (o.report.contains(key)) std::cout << "\n  " << key << ": " << o.report[key].dump();
        std::cout << "\n";
    } else {
        std::cout << o.report.dump(2) << "\n";
    }
    return o.code;
}
