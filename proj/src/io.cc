#include <cosetcsp/error.hpp>
#include <cosetcsp/io.hpp>

#include <fstream>
#include <set>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::vector;

namespace
{
    // runs a parser, turning json library errors into ParseError
    template <typename F_>
    auto parsing(const string & what, F_ && f) -> decltype(f())
    {
        try {
            return f();
        }
        catch (const nlohmann::json::exception & e) {
            throw Error(ErrorCode::ParseError, what + ": " + e.what());
        }
    }

    auto tuples_from_json(const Json & j) -> vector<Tuple>
    {
        vector<Tuple> result;
        for (auto & t : j) {
            Tuple tuple;
            for (auto & v : t) {
                auto x = v.get<long long>();
                if (x < 0)
                    throw Error(ErrorCode::ParseError, "negative group element");
                tuple.push_back(static_cast<Element>(x));
            }
            result.push_back(std::move(tuple));
        }
        return result;
    }

    auto tuples_to_json(const vector<Tuple> & tuples) -> Json
    {
        Json result = Json::array();
        for (auto & t : tuples)
            result.push_back(t);
        return result;
    }

    auto add_relation_from_json(CosetTemplate & t, const string & name, const Json & r) -> void
    {
        auto signature = r.at("signature").get<vector<string>>();
        t.add_relation(name, signature, tuples_from_json(r.at("tuples")));
    }
}

auto cosetcsp::load_json(const string & path) -> Json
{
    std::ifstream in(path);
    if (! in)
        throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
    return parsing(path, [&] { return Json::parse(in); });
}

auto cosetcsp::group_from_json(const Json & j) -> GroupPtr
{
    return parsing("group", [&] {
            if (j.is_string())
                return std::make_shared<const FiniteGroup>(preset_group(j.get<string>()));
            if (j.contains("preset"))
                return std::make_shared<const FiniteGroup>(preset_group(j.at("preset").get<string>()));
            return std::make_shared<const FiniteGroup>(FiniteGroup::from_table(
                        j.at("table").get<vector<vector<long long>>>(), j.value("label", string{})));
            });
}

auto cosetcsp::group_to_json(const FiniteGroup & g) -> Json
{
    Json table = Json::array();
    for (auto & row : g.table())
        table.push_back(row);
    return Json{ { "label", g.label() }, { "table", table } };
}

auto cosetcsp::template_from_json(const Json & j) -> CosetTemplate
{
    return parsing("template", [&] {
            CosetTemplate t;
            for (auto & c : j.at("carriers"))
                t.add_carrier(c.at("name").get<string>(), group_from_json(c.at("group")));
            for (auto & [name, r] : j.at("relations").items())
                add_relation_from_json(t, name, r);
            return t;
            });
}

auto cosetcsp::relation_to_json(const Relation & r) -> Json
{
    return Json{ { "signature", r.signature }, { "tuples", tuples_to_json(r.set.members()) } };
}

auto cosetcsp::template_to_json(const CosetTemplate & t) -> Json
{
    Json carriers = Json::array();
    for (auto & [name, g] : t.carriers())
        carriers.push_back(Json{ { "name", name }, { "group", group_to_json(*g) } });
    Json relations = Json::object();
    for (auto & [name, r] : t.relations())
        relations[name] = relation_to_json(r);
    return Json{ { "carriers", carriers }, { "relations", relations } };
}

auto cosetcsp::formula_from_json(const Json & j) -> PPFormula
{
    return parsing("formula", [&] {
            PPFormula f;
            f.free_count = j.at("free").get<size_t>();
            f.bound_count = j.value("bound", size_t{ 0 });
            for (auto & a : j.at("atoms"))
                f.atoms.push_back(PPAtom{ a.at("rel").get<string>(), a.at("vars").get<vector<size_t>>() });
            return f;
            });
}

auto cosetcsp::formula_to_json(const PPFormula & f) -> Json
{
    Json atoms = Json::array();
    for (auto & a : f.atoms)
        atoms.push_back(Json{ { "rel", a.relation }, { "vars", a.vars } });
    return Json{ { "free", f.free_count }, { "bound", f.bound_count }, { "atoms", atoms } };
}

auto cosetcsp::instance_from_json(const Json & j, CosetTemplate & t) -> Instance
{
    return parsing("instance", [&] {
            if (j.contains("relations"))
                for (auto & [name, r] : j.at("relations").items())
                    if (! t.has_relation(name))
                        add_relation_from_json(t, name, r);

            Instance i;
            for (auto & e : j.at("elements")) {
                auto id = e.get<string>();
                if (std::find(i.elements.begin(), i.elements.end(), id) != i.elements.end())
                    throw Error(ErrorCode::ParseError, "duplicate element '" + id + "'");
                i.elements.push_back(id);
            }
            for (auto & c : j.at("constraints")) {
                auto rel = c.at("rel").get<string>();
                if (! t.has_relation(rel))
                    throw Error(ErrorCode::UnknownRelation, rel);
                i.add_constraint(rel, c.at("args").get<vector<string>>());
            }
            if (j.contains("pp_constraints"))
                for (auto & c : j.at("pp_constraints")) {
                    PPConstraint pc{ formula_from_json(c.at("formula")), {} };
                    for (auto & id : c.at("args").get<vector<string>>())
                        pc.args.push_back(i.index_of(id));
                    i.pp_constraints.push_back(std::move(pc));
                }
            return i;
            });
}

auto cosetcsp::instance_to_json(const Instance & i, const CosetTemplate & t, const CosetTemplate * base) -> Json
{
    Json constraints = Json::array();
    std::set<string> used;
    for (auto & c : i.constraints) {
        vector<string> args;
        for (auto a : c.args)
            args.push_back(i.elements[a]);
        constraints.push_back(Json{ { "rel", c.relation }, { "args", args } });
        used.insert(c.relation);
    }
    Json result{ { "elements", i.elements }, { "constraints", constraints } };
    if (! i.pp_constraints.empty()) {
        Json pps = Json::array();
        for (auto & pc : i.pp_constraints) {
            vector<string> args;
            for (auto a : pc.args)
                args.push_back(i.elements[a]);
            pps.push_back(Json{ { "formula", formula_to_json(pc.formula) }, { "args", args } });
            for (auto & a : pc.formula.atoms)
                used.insert(a.relation);
        }
        result["pp_constraints"] = pps;
    }
    if (base) {
        Json extra = Json::object();
        for (auto & name : used)
            if (! base->has_relation(name))
                extra[name] = relation_to_json(t.relation(name));
        if (! extra.empty())
            result["relations"] = extra;
    }
    return result;
}

auto cosetcsp::assignment_from_json(const Json & j, const Instance & i) -> Assignment
{
    return parsing("assignment", [&] {
            Assignment h(i.size());
            for (auto & [id, v] : j.at("values").items()) {
                auto x = v.get<long long>();
                if (x < 0)
                    throw Error(ErrorCode::ParseError, "negative group element");
                h.set(i.index_of(id), static_cast<Element>(x));
            }
            return h;
            });
}

auto cosetcsp::assignment_to_json(const Assignment & h, const Instance & i) -> Json
{
    Json values = Json::object();
    for (auto e : h.domain())
        values[i.elements[e]] = h.at(e);
    return Json{ { "values", values } };
}

auto cosetcsp::adp_from_json(const Json & j, const CosetTemplate & t) -> AlmostDirectProduct
{
    return parsing("adp", [&] {
            auto names = j.at("carriers").get<vector<string>>();
            if (names.size() != 3)
                throw Error(ErrorCode::InvalidSpec, "an almost-direct product has three carriers");
            std::array<string, 3> carriers{ names[0], names[1], names[2] };
            auto ambient = t.ambient_of(names);
            auto members = tuples_from_json(j.at("R"));
            for (auto & m : members)
                if (! ambient.contains(m))
                    throw Error(ErrorCode::InvalidSpec, "R has a tuple outside the carriers");
            auto r = classify_subset(ambient, std::move(members));
            if (! r.is_subgroup())
                throw Error(ErrorCode::InvalidSpec, "R must be a subgroup");
            auto adp = adp_from_relation(carriers, r);
            if (j.contains("S")) {
                auto & s = j.at("S");
                if (s.size() != 3)
                    throw Error(ErrorCode::InvalidSpec, "S lists three subgroups");
                for (size_t k = 0 ; k < 3 ; ++k) {
                    vector<Tuple> values;
                    for (auto & v : s[k])
                        values.push_back(Tuple{ v.get<Element>() });
                    auto single = single_factor(ambient.factor_ptr(k));
                    for (auto & v : values)
                        if (! single.contains(v))
                            throw Error(ErrorCode::InvalidSpec, "S has an element outside its carrier");
                    adp.factors[k] = classify_subset(single, std::move(values));
                    if (! adp.factors[k].is_subgroup())
                        throw Error(ErrorCode::InvalidSpec, "each S_i must be a subgroup");
                }
                for (auto & m : adp.relation.members())
                    if (! adp.in_factors(m))
                        throw Error(ErrorCode::InvalidSpec, "R must lie in S1 x S2 x S3");
            }
            return adp;
            });
}

auto cosetcsp::adp_to_json(const AlmostDirectProduct & adp) -> Json
{
    Json s = Json::array();
    for (auto & f : adp.factors) {
        vector<Element> values;
        for (auto & m : f.members())
            values.push_back(m[0]);
        s.push_back(values);
    }
    return Json{ { "carriers", adp.carriers }, { "S", s }, { "R", tuples_to_json(adp.relation.members()) } };
}

auto cosetcsp::extraction_to_json(const AdpExtraction & e) -> Json
{
    auto result = adp_to_json(e.adp);
    result["H"] = tuples_to_json(e.extendable.members());
    result["classification"] = to_string(e.kind);
    result["pp_witnesses"] = Json{
        { "S1", formula_to_json(e.factor_witnesses[0]) },
        { "S2", formula_to_json(e.factor_witnesses[1]) },
        { "S3", formula_to_json(e.factor_witnesses[2]) },
        { "R", formula_to_json(e.relation_witness) },
        { "H", formula_to_json(e.extendable_witness) } };
    return result;
}

auto cosetcsp::pipeline_to_json(const PipelineResult & r) -> Json
{
    auto result = extraction_to_json(r.extraction);
    Json chain = Json::array();
    for (auto & w : r.chain)
        chain.push_back(Json{ { "k", w.k }, { "j", w.j }, { "elements", w.instance.size() },
                { "values", assignment_to_json(w.h, w.instance).at("values") } });
    result["anomaly"] = chain.empty() ? Json() : chain.back().at("values");
    result["chain"] = chain;
    result["reductions"] = r.reductions;
    return result;
}

auto cosetcsp::slot_to_json(const Slot & s) -> Json
{
    return Json::array({ to_string(s.kind), s.i, s.j });
}

auto cosetcsp::slot_from_json(const Json & j) -> Slot
{
    return parsing("slot", [&] {
            if (! j.is_array() || j.size() != 3)
                throw Error(ErrorCode::InvalidSpec, "slot is [kind, i, j]");
            auto kind = j[0].get<string>();
            if (kind != "R" && kind != "Rp")
                throw Error(ErrorCode::InvalidSpec, "slot kind is R or Rp");
            return Slot{ kind == "R" ? SlotKind::R : SlotKind::Rp, j[1].get<size_t>(), j[2].get<size_t>() };
            });
}

auto cosetcsp::torus_spec_from_json(const Json & j, const CosetTemplate & t,
        const std::function<Json (const string &)> & resolve) -> TorusSpec
{
    return parsing("torus spec", [&] {
            auto & a = j.at("adp");
            auto adp = adp_from_json(a.is_string() ? resolve(a.get<string>()) : a, t);
            auto spec = make_torus_spec(j.at("n").get<size_t>(), adp);
            if (j.contains("twists"))
                for (auto & tw : j.at("twists")) {
                    auto s = slot_from_json(tw.at("slot"));
                    if (s.i >= spec.n || s.j >= spec.n)
                        throw Error(ErrorCode::InvalidSpec, "slot index out of range");
                    auto pi = tuples_from_json(Json::array({ tw.at("pi") })).front();
                    if (! adp.carrier_product().contains(pi) || ! adp.in_factors(pi))
                        throw Error(ErrorCode::InvalidSpec, "twist must lie in S1 x S2 x S3");
                    spec = twist(spec, s, pi);
                }
            return spec;
            });
}

auto cosetcsp::torus_spec_to_json(const TorusSpec & spec) -> Json
{
    Json twists = Json::array();
    for (auto & [s, pi] : spec.shifts)
        twists.push_back(Json{ { "slot", slot_to_json(s) }, { "pi", pi } });
    return Json{ { "n", spec.n }, { "adp", adp_to_json(spec.adp) }, { "twists", twists } };
}

auto cosetcsp::experiment_row_to_json(const ExperimentRow & row) -> Json
{
    return Json{ { "n", row.n }, { "variant", row.variant }, { "solver", row.solver },
        { "consistency", row.consistency }, { "certificate", row.certificate }, { "seconds", row.seconds } };
}

auto cosetcsp::families_to_json(const ConsistencyFamilies & f, const Instance & i) -> Json
{
    Json result = Json::array();
    for (auto & fam : f.families()) {
        vector<string> ids;
        for (auto e : fam.elements)
            ids.push_back(i.elements[e]);
        result.push_back(Json{ { "X", ids }, { "members", tuples_to_json(fam.members()) } });
    }
    return result;
}
