#include <cosetcsp/error.hpp>
#include <cosetcsp/instance.hpp>

#include <algorithm>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::vector;

auto Instance::index_of(const string & id) const -> size_t
{
    auto it = std::find(elements.begin(), elements.end(), id);
    if (it == elements.end())
        throw Error(ErrorCode::PreconditionViolated, "unknown element '" + id + "'");
    return static_cast<size_t>(it - elements.begin());
}

auto Instance::add_element(const string & id) -> size_t
{
    if (std::find(elements.begin(), elements.end(), id) != elements.end())
        throw Error(ErrorCode::InvalidSpec, "duplicate element '" + id + "'");
    elements.push_back(id);
    return elements.size() - 1;
}

auto Instance::add_constraint(const string & relation, const vector<string> & ids) -> void
{
    Constraint c{ relation, {} };
    for (auto & id : ids)
        c.args.push_back(index_of(id));
    constraints.push_back(std::move(c));
}

Assignment::Assignment(size_t element_count) :
    _values(element_count)
{
}

auto Assignment::total(const vector<Element> & values) -> Assignment
{
    Assignment a(values.size());
    for (size_t e = 0 ; e < values.size() ; ++e)
        a.set(e, values[e]);
    return a;
}

auto Assignment::domain() const -> vector<size_t>
{
    vector<size_t> result;
    for (size_t e = 0 ; e < _values.size() ; ++e)
        if (_values[e])
            result.push_back(e);
    return result;
}

auto Assignment::domain_size() const -> size_t
{
    return static_cast<size_t>(std::count_if(_values.begin(), _values.end(), [] (auto & v) { return v.has_value(); }));
}

auto Assignment::is_total() const -> bool
{
    return domain_size() == _values.size();
}

auto Assignment::restrict_to(const vector<size_t> & subset) const -> Assignment
{
    Assignment result(_values.size());
    for (auto e : subset)
        if (_values[e])
            result.set(e, *_values[e]);
    return result;
}

auto Assignment::tuple(const vector<size_t> & elements) const -> Tuple
{
    Tuple t;
    t.reserve(elements.size());
    for (auto e : elements)
        t.push_back(at(e));
    return t;
}

auto cosetcsp::constraining_carriers(const Instance & i, const CosetTemplate & t) -> vector<string>
{
    vector<string> result(i.size());
    auto bind = [&] (size_t e, const string & carrier) {
        if (e >= i.size())
            throw Error(ErrorCode::PreconditionViolated, "constraint argument out of range");
        if (result[e].empty())
            result[e] = carrier;
        else if (result[e] != carrier)
            throw Error(ErrorCode::ContradictoryInstance, "element '" + i.elements[e] + "' is constrained by both "
                    + result[e] + " and " + carrier);
    };

    for (auto & c : i.constraints) {
        auto & r = t.relation(c.relation);
        if (r.arity() != c.args.size())
            throw Error(ErrorCode::ArityMismatch, "constraint on '" + c.relation + "'");
        for (size_t k = 0 ; k < c.args.size() ; ++k)
            bind(c.args[k], r.signature[k]);
    }
    for (auto & pc : i.pp_constraints) {
        if (pc.args.size() != pc.formula.free_count)
            throw Error(ErrorCode::ArityMismatch, "pp-constraint argument count");
        // the free variables' carriers follow from the formula's own atoms
        vector<string> var_carrier(pc.formula.variable_count());
        for (auto & atom : pc.formula.atoms) {
            auto & r = t.relation(atom.relation);
            if (r.arity() != atom.vars.size())
                throw Error(ErrorCode::ArityMismatch, "pp atom on '" + atom.relation + "'");
            for (size_t k = 0 ; k < atom.vars.size() ; ++k) {
                auto v = atom.vars.at(k);
                if (v >= var_carrier.size())
                    throw Error(ErrorCode::PreconditionViolated, "pp atom variable out of range");
                if (var_carrier[v].empty())
                    var_carrier[v] = r.signature[k];
                else if (var_carrier[v] != r.signature[k])
                    throw Error(ErrorCode::ContradictoryInstance, "pp-formula variable with two carriers");
            }
        }
        for (size_t k = 0 ; k < pc.args.size() ; ++k)
            if (! var_carrier[k].empty())
                bind(pc.args[k], var_carrier[k]);
    }
    return result;
}

auto cosetcsp::constraining_groups(const Instance & i, const CosetTemplate & t) -> vector<GroupPtr>
{
    auto carriers = constraining_carriers(i, t);
    vector<GroupPtr> result;
    result.reserve(carriers.size());
    for (size_t e = 0 ; e < carriers.size() ; ++e) {
        if (carriers[e].empty())
            throw Error(ErrorCode::PreconditionViolated, "element '" + i.elements[e] + "' has no constraining group");
        result.push_back(t.carrier(carriers[e]));
    }
    return result;
}

auto cosetcsp::normalize_instance(const Instance & i, const CosetTemplate & t) -> Instance
{
    auto carriers = constraining_carriers(i, t);
    vector<long> new_index(i.size(), -1);
    Instance result;
    for (size_t e = 0 ; e < i.size() ; ++e)
        if (! carriers[e].empty()) {
            new_index[e] = static_cast<long>(result.elements.size());
            result.elements.push_back(i.elements[e]);
        }
    for (auto c : i.constraints) {
        for (auto & a : c.args)
            a = static_cast<size_t>(new_index[a]);
        result.constraints.push_back(std::move(c));
    }
    for (auto pc : i.pp_constraints) {
        for (auto & a : pc.args)
            a = static_cast<size_t>(new_index[a]);
        result.pp_constraints.push_back(std::move(pc));
    }
    return result;
}

auto cosetcsp::is_partial_solution(const Instance & i, const CosetTemplate & t, const Assignment & h) -> bool
{
    for (auto & c : i.constraints) {
        if (! std::all_of(c.args.begin(), c.args.end(), [&] (size_t a) { return h.has(a); }))
            continue;
        if (! t.relation(c.relation).set.contains(h.tuple(c.args)))
            return false;
    }
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "expand pp-constraints before checking partial solutions");
    return true;
}

auto cosetcsp::is_pre_assignment(const Instance & i, const CosetTemplate & t, const Assignment & h) -> bool
{
    if (h.element_count() != i.size())
        return false;
    auto groups = constraining_groups(i, t);
    for (size_t e = 0 ; e < i.size() ; ++e)
        if (h.has(e) && h.at(e) >= groups[e]->order())
            return false;
    return true;
}

auto cosetcsp::tuple_group(const Instance & i, const CosetTemplate & t, const vector<size_t> & elements) -> ProductGroup
{
    auto groups = constraining_groups(i, t);
    vector<GroupPtr> factors;
    for (auto e : elements)
        factors.push_back(groups.at(e));
    return ProductGroup{ std::move(factors) };
}

auto cosetcsp::act_assignment(const Instance & i, const CosetTemplate & t, const Assignment & h, const Assignment & s) -> Assignment
{
    auto groups = constraining_groups(i, t);
    Assignment result(h.element_count());
    for (auto e : h.domain())
        result.set(e, groups[e]->op(h.at(e), s.at(e)));
    return result;
}

auto cosetcsp::invert_assignment(const Instance & i, const CosetTemplate & t, const Assignment & s) -> Assignment
{
    auto groups = constraining_groups(i, t);
    Assignment result(s.element_count());
    for (auto e : s.domain())
        result.set(e, groups[e]->inverse(s.at(e)));
    return result;
}

auto cosetcsp::identity_assignment(const Instance & i, const CosetTemplate & t) -> Assignment
{
    auto groups = constraining_groups(i, t);
    Assignment result(i.size());
    for (size_t e = 0 ; e < i.size() ; ++e)
        result.set(e, groups[e]->identity());
    return result;
}

auto cosetcsp::act_instance(const Instance & i, const Assignment & s, CosetTemplate & t) -> Instance
{
    if (! s.is_total() || ! is_pre_assignment(i, t, s))
        throw Error(ErrorCode::PreconditionViolated, "act_instance needs a total pre-solution");
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "expand pp-constraints before acting on an instance");
    Instance result = i;
    for (auto & c : result.constraints)
        c.relation = t.intern_translate(c.relation, s.tuple(c.args));
    return result;
}

auto cosetcsp::is_subgroup_instance(const Instance & i, const CosetTemplate & t) -> bool
{
    return std::all_of(i.constraints.begin(), i.constraints.end(),
            [&] (const Constraint & c) { return t.relation(c.relation).set.is_subgroup(); });
}
