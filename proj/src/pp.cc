#include <cosetcsp/error.hpp>
#include <cosetcsp/pp.hpp>

#include <algorithm>
#include <numeric>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::vector;

auto cosetcsp::validate_formula(const PPFormula & f, const CosetTemplate & t) -> void
{
    vector<char> occurs(f.variable_count(), 0);
    for (auto & atom : f.atoms) {
        if (t.relation(atom.relation).arity() != atom.vars.size())
            throw Error(ErrorCode::ArityMismatch, "pp atom on '" + atom.relation + "'");
        for (auto v : atom.vars) {
            if (v >= f.variable_count())
                throw Error(ErrorCode::PreconditionViolated, "pp atom variable out of range");
            occurs[v] = 1;
        }
    }
    for (size_t v = 0 ; v < f.free_count ; ++v)
        if (! occurs[v])
            throw Error(ErrorCode::PreconditionViolated, "free variable " + std::to_string(v) + " occurs in no atom");
}

auto cosetcsp::formula_instance(const PPFormula & f) -> Instance
{
    Instance i;
    for (size_t v = 0 ; v < f.variable_count() ; ++v)
        i.elements.push_back("v" + std::to_string(v));
    for (auto & atom : f.atoms)
        i.constraints.push_back(Constraint{ atom.relation, atom.vars });
    return i;
}

auto cosetcsp::materialize_pp(const CosetTemplate & t, const PPFormula & f, const SolveOptions & options) -> CosetSet
{
    validate_formula(f, t);
    // unused bound variables sit after the free ones, so dropping them keeps free indices
    auto gadget = normalize_instance(formula_instance(f), t);
    vector<size_t> free(f.free_count);
    std::iota(free.begin(), free.end(), 0);
    auto tuples = project_solutions(gadget, t, free, options);
    if (tuples.empty())
        throw Error(ErrorCode::EmptyRelation, "pp-formula is unsatisfiable");
    return classify_subset(tuple_group(gadget, t, free), std::move(tuples));
}

auto cosetcsp::formula_from_instance(const Instance & i, const vector<size_t> & free) -> PPFormula
{
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "expand pp-constraints first");
    vector<long> var_of(i.size(), -1);
    PPFormula f;
    f.free_count = free.size();
    for (size_t k = 0 ; k < free.size() ; ++k) {
        if (var_of.at(free[k]) != -1)
            throw Error(ErrorCode::PreconditionViolated, "repeated free element");
        var_of[free[k]] = static_cast<long>(k);
    }
    size_t next = free.size();
    for (size_t e = 0 ; e < i.size() ; ++e)
        if (var_of[e] == -1)
            var_of[e] = static_cast<long>(next++);
    f.bound_count = i.size() - free.size();
    for (auto & c : i.constraints) {
        PPAtom atom{ c.relation, {} };
        for (auto a : c.args)
            atom.vars.push_back(static_cast<size_t>(var_of[a]));
        f.atoms.push_back(std::move(atom));
    }
    return f;
}

FormulaBuilder::FormulaBuilder(size_t free_count)
{
    _formula.free_count = free_count;
}

auto FormulaBuilder::fresh() -> size_t
{
    return _formula.free_count + _formula.bound_count++;
}

auto FormulaBuilder::atom(const string & relation, vector<size_t> vars) -> void
{
    _formula.atoms.push_back(PPAtom{ relation, std::move(vars) });
}

auto FormulaBuilder::conjoin(const PPFormula & f, const vector<size_t> & args) -> void
{
    if (args.size() != f.free_count)
        throw Error(ErrorCode::ArityMismatch, "conjoin: argument count");
    vector<size_t> rename(f.variable_count());
    for (size_t v = 0 ; v < f.free_count ; ++v)
        rename[v] = args[v];
    for (size_t v = f.free_count ; v < f.variable_count() ; ++v)
        rename[v] = fresh();
    for (auto & a : f.atoms) {
        PPAtom copy{ a.relation, {} };
        for (auto v : a.vars)
            copy.vars.push_back(rename[v]);
        _formula.atoms.push_back(std::move(copy));
    }
}

auto FormulaBuilder::build() const -> PPFormula
{
    return _formula;
}

auto cosetcsp::translate_formula(const PPFormula & f, const Assignment & s, CosetTemplate & t) -> PPFormula
{
    auto gadget = formula_instance(f);
    auto moved = act_instance(gadget, s, t);
    PPFormula result = f;
    for (size_t k = 0 ; k < result.atoms.size() ; ++k)
        result.atoms[k].relation = moved.constraints[k].relation;
    return result;
}

auto cosetcsp::translate_formula(const PPFormula & f, const Tuple & pi, CosetTemplate & t) -> PPFormula
{
    validate_formula(f, t);
    if (pi.size() != f.free_count)
        throw Error(ErrorCode::ArityMismatch, "translate_formula: translation arity");
    auto gadget = formula_instance(f);
    auto groups = constraining_carriers(gadget, t);
    Assignment s(f.variable_count());
    for (size_t v = 0 ; v < f.variable_count() ; ++v) {
        if (v < f.free_count)
            s.set(v, pi[v]);
        else
            s.set(v, groups[v].empty() ? 0 : t.carrier(groups[v])->identity());
    }
    // unused bound variables have no carrier; drop them from the acted-on gadget
    if (std::any_of(groups.begin(), groups.end(), [] (auto & g) { return g.empty(); })) {
        auto trimmed = normalize_instance(gadget, t);
        PPFormula compact = formula_from_instance(trimmed, [&] {
                vector<size_t> free(f.free_count);
                std::iota(free.begin(), free.end(), 0);
                return free;
                }());
        return translate_formula(compact, pi, t);
    }
    return translate_formula(f, s, t);
}

auto cosetcsp::expand_pp_gadget(const Instance & i, const CosetTemplate & t) -> Instance
{
    Instance result;
    result.elements = i.elements;
    result.constraints = i.constraints;
    for (size_t g = 0 ; g < i.pp_constraints.size() ; ++g) {
        auto & pc = i.pp_constraints[g];
        validate_formula(pc.formula, t);
        if (pc.args.size() != pc.formula.free_count)
            throw Error(ErrorCode::ArityMismatch, "pp-constraint argument count");

        vector<long> element_of(pc.formula.variable_count(), -1);
        for (size_t v = 0 ; v < pc.formula.free_count ; ++v)
            element_of[v] = static_cast<long>(pc.args[v]);
        for (auto & atom : pc.formula.atoms) {
            Constraint c{ atom.relation, {} };
            for (auto v : atom.vars) {
                if (element_of[v] == -1)
                    element_of[v] = static_cast<long>(result.add_element("pp" + std::to_string(g) + "." + std::to_string(v)));
                c.args.push_back(static_cast<size_t>(element_of[v]));
            }
            result.constraints.push_back(std::move(c));
        }
    }
    return result;
}
