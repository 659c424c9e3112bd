#include "compiled.hh"

#include <cosetcsp/error.hpp>
#include <cosetcsp/pp.hpp>
#include <cosetcsp/solver.hpp>

#include <algorithm>

using namespace cosetcsp;
using namespace cosetcsp::innards;

using std::optional;
using std::size_t;
using std::vector;

namespace
{
    class Searcher
    {
        private:
            const CompiledInstance & _ci;
            std::uint64_t _budget;
            std::uint64_t _nodes = 0;

        public:
            vector<long> values;

            Searcher(const CompiledInstance & ci, std::uint64_t budget) :
                _ci(ci),
                _budget(budget),
                values(ci.size(), -1)
            {
            }

            // Places the fixed part of an assignment; false if it already clashes.
            auto place(const Assignment & h) -> bool
            {
                for (auto e : h.domain()) {
                    if (h.at(e) >= _ci.groups[e]->order())
                        throw Error(ErrorCode::PreconditionViolated, "assigned value outside the constraining group");
                    values[e] = h.at(e);
                }
                for (auto e : h.domain())
                    for (auto c : _ci.incident[e])
                        if (! check(_ci.constraints[c]))
                            return false;
                return true;
            }

            auto check(const CompiledConstraint & c) const -> bool
            {
                bool complete = std::all_of(c.args.begin(), c.args.end(), [&] (size_t a) { return values[a] >= 0; });
                return complete ? c.holds(values) : c.supported(values);
            }

            auto admissible(size_t e) const -> bool
            {
                for (auto c : _ci.incident[e])
                    if (! check(_ci.constraints[c]))
                        return false;
                return true;
            }

            // Returns true when the leaf callback asked to stop.
            template <typename Leaf_>
            auto dfs(const vector<size_t> & order, size_t depth, Leaf_ && leaf) -> bool
            {
                if (depth == order.size())
                    return leaf();
                auto e = order[depth];
                for (Element v = 0 ; v < _ci.groups[e]->order() ; ++v) {
                    values[e] = v;
                    if (! admissible(e))
                        continue;
                    if (++_nodes > _budget)
                        throw Error(ErrorCode::BudgetExceeded, "node budget of " + std::to_string(_budget) + " exhausted");
                    if (dfs(order, depth + 1, leaf)) {
                        return true;
                    }
                }
                values[e] = -1;
                return false;
            }

            auto free_elements() const -> vector<size_t>
            {
                vector<size_t> order;
                for (size_t e = 0 ; e < values.size() ; ++e)
                    if (values[e] < 0)
                        order.push_back(e);
                return order;
            }

            auto snapshot() const -> Assignment
            {
                Assignment a(values.size());
                for (size_t e = 0 ; e < values.size() ; ++e)
                    a.set(e, static_cast<Element>(values[e]));
                return a;
            }
    };

    auto restrict_to_prefix(const Assignment & a, size_t count) -> Assignment
    {
        Assignment r(count);
        for (size_t e = 0 ; e < count ; ++e)
            if (a.has(e))
                r.set(e, a.at(e));
        return r;
    }

    auto widen(const Assignment & h, size_t count) -> Assignment
    {
        Assignment r(count);
        for (auto e : h.domain())
            r.set(e, h.at(e));
        return r;
    }
}

auto cosetcsp::solve_extending(const Instance & i, const CosetTemplate & t, const Assignment & h,
        const SolveOptions & options) -> optional<Assignment>
{
    if (! i.pp_constraints.empty()) {
        auto expanded = expand_pp_gadget(i, t);
        auto s = solve_extending(expanded, t, widen(h, expanded.size()), options);
        if (! s)
            return std::nullopt;
        return restrict_to_prefix(*s, i.size());
    }
    if (h.element_count() != i.size())
        throw Error(ErrorCode::PreconditionViolated, "assignment does not match the instance");

    CompiledInstance ci(i, t);
    Searcher search(ci, options.node_budget);
    if (! search.place(h))
        return std::nullopt;
    optional<Assignment> found;
    search.dfs(search.free_elements(), 0, [&] {
            found = search.snapshot();
            return true;
            });
    return found;
}

auto cosetcsp::solve(const Instance & i, const CosetTemplate & t, const SolveOptions & options) -> optional<Assignment>
{
    return solve_extending(i, t, Assignment(i.size()), options);
}

auto cosetcsp::extends_to_solution(const Instance & i, const CosetTemplate & t, const Assignment & h,
        const SolveOptions & options) -> bool
{
    return solve_extending(i, t, h, options).has_value();
}

auto cosetcsp::for_each_solution(const Instance & i, const CosetTemplate & t,
        const std::function<bool (const Assignment &)> & f, const SolveOptions & options) -> void
{
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "expand pp-constraints before enumerating solutions");
    CompiledInstance ci(i, t);
    Searcher search(ci, options.node_budget);
    vector<size_t> order(i.size());
    for (size_t e = 0 ; e < order.size() ; ++e)
        order[e] = e;
    search.dfs(order, 0, [&] { return ! f(search.snapshot()); });
}

auto cosetcsp::all_solutions(const Instance & i, const CosetTemplate & t, size_t cap, const SolveOptions & options) -> SolutionSet
{
    SolutionSet result;
    for_each_solution(i, t, [&] (const Assignment & a) {
            if (result.solutions.size() == cap)
                throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " solutions");
            result.solutions.push_back(a);
            return true;
            }, options);

    if (result.solutions.empty())
        return result;

    vector<size_t> all(i.size());
    for (size_t e = 0 ; e < all.size() ; ++e)
        all[e] = e;
    vector<Tuple> tuples;
    tuples.reserve(result.solutions.size());
    for (auto & s : result.solutions)
        tuples.push_back(s.tuple(all));
    auto set = classify_subset(tuple_group(i, t, all), std::move(tuples));
    result.kind = set.kind();
    result.coset_certified = set.is_coset();
    return result;
}

auto cosetcsp::project_solutions(const Instance & i, const CosetTemplate & t, const vector<size_t> & vars,
        const SolveOptions & options) -> vector<Tuple>
{
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "expand pp-constraints before projecting solutions");
    CompiledInstance ci(i, t);
    Searcher search(ci, options.node_budget);

    vector<char> is_var(i.size(), 0);
    for (auto v : vars) {
        if (v >= i.size() || is_var[v])
            throw Error(ErrorCode::PreconditionViolated, "projection variables must be distinct elements");
        is_var[v] = 1;
    }
    vector<size_t> rest;
    for (size_t e = 0 ; e < i.size() ; ++e)
        if (! is_var[e])
            rest.push_back(e);

    vector<Tuple> result;
    search.dfs(vars, 0, [&] {
            bool extends = search.dfs(rest, 0, [] { return true; });
            if (extends) {
                Tuple tuple;
                for (auto v : vars)
                    tuple.push_back(static_cast<Element>(search.values[v]));
                result.push_back(std::move(tuple));
                for (auto e : rest)
                    search.values[e] = -1;
            }
            return false;
            });
    return result;
}
