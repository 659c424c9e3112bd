#include "combinations.hh"

#include <cosetcsp/anomaly.hpp>
#include <cosetcsp/error.hpp>
#include <cosetcsp/polymorphism.hpp>
#include <cosetcsp/pp.hpp>

#include <algorithm>
#include <random>
#include <set>

using namespace cosetcsp;
using namespace cosetcsp::innards;

using std::optional;
using std::size_t;
using std::string;
using std::vector;

auto cosetcsp::is_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h, size_t k,
        const SolveOptions & options) -> bool
{
    auto dom = h.domain();
    if (k >= dom.size() || ! is_partial_solution(i, t, h))
        return false;
    if (extends_to_solution(i, t, h, options))
        return false;
    return for_each_combination(dom.size(), k, [&] (const vector<size_t> & positions) {
            return extends_to_solution(i, t, h.restrict_to(pick(dom, positions)), options);
            });
}

auto cosetcsp::find_kj_anomaly(const Instance & i, const CosetTemplate & t, size_t k, size_t j,
        const SolveOptions & options) -> optional<AnomalyWitness>
{
    if (j > i.size())
        throw Error(ErrorCode::PreconditionViolated, "anomaly size exceeds the instance");
    auto groups = constraining_groups(i, t);
    optional<AnomalyWitness> found;
    for_each_combination(i.size(), j, [&] (const vector<size_t> & dom) {
            vector<GroupPtr> factors;
            for (auto e : dom)
                factors.push_back(groups[e]);
            ProductGroup space{ factors };
            Tuple values(dom.size(), 0);
            do {
                Assignment h(i.size());
                for (size_t p = 0 ; p < dom.size() ; ++p)
                    h.set(dom[p], values[p]);
                if (is_anomaly(i, t, h, k, options)) {
                    found = AnomalyWitness{ i, h, k, j };
                    return false;
                }
            } while (next_tuple(space, values));
            return true;
            });
    return found;
}

auto cosetcsp::shrink_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h,
        const SolveOptions & options) -> AnomalyWitness
{
    auto dom = h.domain();
    if (dom.size() <= 2 || ! is_anomaly(i, t, h, 2, options))
        throw Error(ErrorCode::NotAnAnomaly, "shrink_anomaly expects a (2, j)-anomaly");

    for (size_t s = 1 ; s <= dom.size() ; ++s) {
        optional<Assignment> smallest;
        for_each_combination(dom.size(), s, [&] (const vector<size_t> & positions) {
                auto r = h.restrict_to(pick(dom, positions));
                if (! extends_to_solution(i, t, r, options)) {
                    smallest = r;
                    return false;
                }
                return true;
                });
        if (smallest)
            return AnomalyWitness{ i, *smallest, s - 1, s };
    }
    throw Error(ErrorCode::AssertionFailure, "an anomaly must have a non-extending subset");
}

auto cosetcsp::normalize_subgroup_instance(const Instance & i, CosetTemplate & t, const SolveOptions & options) -> ShiftedInstance
{
    auto h = solve(i, t, options);
    if (! h)
        throw Error(ErrorCode::Unsolvable, "normalize_subgroup_instance needs a solvable instance");
    auto shift = invert_assignment(i, t, *h);
    auto moved = act_instance(i, shift, t);
    if (! is_subgroup_instance(moved, t))
        throw Error(ErrorCode::AssertionFailure, "shifting by an inverse solution must give a subgroup instance");
    return ShiftedInstance{ std::move(moved), std::move(shift) };
}

auto cosetcsp::reduce_anomaly_step(const Instance & i, CosetTemplate & t, const Assignment & h, size_t k,
        const SolveOptions & options) -> AnomalyWitness
{
    if (k < 2 || h.domain_size() != k + 1)
        throw Error(ErrorCode::PreconditionViolated, "reduce_anomaly_step expects a (k, k+1)-anomaly with k >= 2");
    if (! is_subgroup_instance(i, t))
        throw Error(ErrorCode::PreconditionViolated, "reduce_anomaly_step expects a subgroup instance");
    if (! is_anomaly(i, t, h, k, options))
        throw Error(ErrorCode::PreconditionViolated, "input is not a (k, k+1)-anomaly");

    auto dom = h.domain();
    auto a = dom.front();
    auto carriers = constraining_carriers(i, t);

    Instance augmented = i;
    augmented.constraints.push_back(Constraint{ identity_relation_name(carriers[a]), { a } });

    auto bar_h = solve_extending(i, t, h.restrict_to({ a }), options);
    if (! bar_h)
        throw Error(ErrorCode::AssertionFailure, "a single-element restriction of an anomaly must extend");

    auto groups = constraining_groups(i, t);
    Assignment reduced(i.size());
    for (auto x : dom)
        if (x != a)
            reduced.set(x, groups[x]->op(h.at(x), groups[x]->inverse(bar_h->at(x))));

    if (! is_anomaly(augmented, t, reduced, k - 1, options))
        throw Error(ErrorCode::AssertionFailure, "reduced assignment is not a (k-1, k)-anomaly");
    return AnomalyWitness{ std::move(augmented), std::move(reduced), k - 1, k };
}

auto cosetcsp::extendable_group(const Instance & i, const CosetTemplate & t, const vector<size_t> & X,
        const SolveOptions & options) -> CosetSet
{
    auto tuples = project_solutions(i, t, X, options);
    if (tuples.empty())
        throw Error(ErrorCode::EmptyH, "instance has no solution");
    return classify_subset(tuple_group(i, t, X), std::move(tuples));
}

auto AlmostDirectProduct::in_factors(const Tuple & pi) const -> bool
{
    if (pi.size() != 3)
        return false;
    for (size_t k = 0 ; k < 3 ; ++k)
        if (! factors[k].contains(Tuple{ pi[k] }))
            return false;
    return true;
}

auto AlmostDirectProduct::local() const -> std::pair<std::array<EmbeddedSubgroup, 3>, CosetSet>
{
    std::array<EmbeddedSubgroup, 3> subs{ embed_subgroup(factors[0]), embed_subgroup(factors[1]), embed_subgroup(factors[2]) };
    ProductGroup ambient{ { subs[0].group, subs[1].group, subs[2].group } };
    vector<Tuple> members;
    for (auto & m : relation.members()) {
        Tuple local(3);
        for (size_t k = 0 ; k < 3 ; ++k) {
            auto v = subs[k].from_parent[m[k]];
            if (v < 0)
                throw Error(ErrorCode::PreconditionViolated, "relation leaves its factor subgroups");
            local[k] = static_cast<Element>(v);
        }
        members.push_back(std::move(local));
    }
    auto set = classify_subset(ambient, std::move(members));
    return { std::move(subs), std::move(set) };
}

auto AlmostDirectProduct::kind() const -> AdpKind
{
    auto [subs, r] = local();
    if (! r.is_subgroup())
        return AdpKind::NotADP;
    return classify_almost_direct(r);
}

auto AlmostDirectProduct::cosets() const -> vector<CosetSet>
{
    vector<CosetSet> result{ relation };
    std::set<vector<Tuple>> seen{ relation.members() };
    for (auto & a : factors[0].members())
        for (auto & b : factors[1].members())
            for (auto & c : factors[2].members()) {
                auto moved = translate(relation, Tuple{ a[0], b[0], c[0] });
                if (seen.insert(moved.members()).second)
                    result.push_back(std::move(moved));
            }
    return result;
}

auto cosetcsp::adp_from_relation(const std::array<string, 3> & carriers, const CosetSet & relation) -> AlmostDirectProduct
{
    if (relation.ambient().arity() != 3)
        throw Error(ErrorCode::PreconditionViolated, "almost-direct products are ternary");
    auto projection = [&] (size_t k) {
        vector<Tuple> values;
        for (auto & m : relation.members())
            values.push_back(Tuple{ m[k] });
        return classify_subset(single_factor(relation.ambient().factor_ptr(k)), std::move(values));
    };
    return AlmostDirectProduct{ carriers, { projection(0), projection(1), projection(2) }, relation };
}

namespace
{
    // tau_k in S_k iff some member of H has tau_k at k and the identity at the
    // next coordinate, and some member has tau_k at k and the identity at the other
    auto two_sided_factor(const CosetSet & h, size_t k) -> CosetSet
    {
        auto & amb = h.ambient();
        auto id = amb.identity();
        std::set<Element> first, second;
        size_t p = (k + 1) % 3, q = (k + 2) % 3;
        for (auto & m : h.members()) {
            if (m[q] == id[q])
                first.insert(m[k]);
            if (m[p] == id[p])
                second.insert(m[k]);
        }
        vector<Tuple> both;
        for (auto v : first)
            if (second.contains(v))
                both.push_back(Tuple{ v });
        return classify_subset(single_factor(amb.factor_ptr(k)), std::move(both));
    }
}

auto cosetcsp::build_adp_from_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h,
        const SolveOptions & options) -> AdpExtraction
{
    auto dom = h.domain();
    if (dom.size() != 3)
        throw Error(ErrorCode::PreconditionViolated, "build_adp_from_anomaly expects a (2,3)-anomaly");
    if (! is_subgroup_instance(i, t))
        throw Error(ErrorCode::PreconditionViolated, "build_adp_from_anomaly expects a subgroup instance");
    if (! is_anomaly(i, t, h, 2, options))
        throw Error(ErrorCode::NotAnAnomaly, "build_adp_from_anomaly");

    auto H = extendable_group(i, t, dom, options);
    if (! H.is_subgroup())
        throw Error(ErrorCode::AssertionFailure, "extendable set of a subgroup instance is not a subgroup");
    if (H.contains(h.tuple(dom)))
        throw Error(ErrorCode::AssertionFailure, "anomaly lies in H");

    std::array<CosetSet, 3> factors{ two_sided_factor(H, 0), two_sided_factor(H, 1), two_sided_factor(H, 2) };
    for (auto & s : factors)
        if (! s.is_subgroup())
            throw Error(ErrorCode::AssertionFailure, "two-sided factor is not a subgroup");

    vector<Tuple> restricted;
    for (auto & m : H.members())
        if (factors[0].contains(Tuple{ m[0] }) && factors[1].contains(Tuple{ m[1] }) && factors[2].contains(Tuple{ m[2] }))
            restricted.push_back(m);
    auto R = classify_subset(H.ambient(), std::move(restricted));

    auto carriers = constraining_carriers(i, t);
    std::array<string, 3> names{ carriers[dom[0]], carriers[dom[1]], carriers[dom[2]] };
    AdpExtraction result{ AlmostDirectProduct{ names, factors, R }, H, AdpKind::NotADP, {}, {}, {} };
    result.kind = result.adp.kind();
    if (result.kind == AdpKind::NotADP)
        throw Error(ErrorCode::AssertionFailure, "restriction of H is not an almost-direct product");

    auto hf = formula_from_instance(i, dom);
    result.extendable_witness = hf;
    for (size_t k = 0 ; k < 3 ; ++k) {
        size_t p = (k + 1) % 3, q = (k + 2) % 3;
        FormulaBuilder b(1);
        // copy with identity at q, then a copy with identity at p
        for (auto fixed : { q, p }) {
            vector<size_t> args(3);
            args[k] = 0;
            for (auto other : { p, q })
                args[other] = b.fresh();
            b.conjoin(hf, args);
            b.atom(identity_relation_name(names[fixed]), { args[fixed] });
        }
        result.factor_witnesses[k] = b.build();
    }
    FormulaBuilder rb(3);
    rb.conjoin(hf, { 0, 1, 2 });
    for (size_t k = 0 ; k < 3 ; ++k)
        rb.conjoin(result.factor_witnesses[k], { k });
    result.relation_witness = rb.build();
    return result;
}

namespace
{
    auto random_instance(const CosetTemplate & t, std::mt19937_64 & rng) -> optional<Instance>
    {
        vector<const Relation *> rels;
        for (auto & [name, r] : t.relations())
            rels.push_back(&r);
        if (rels.empty())
            return std::nullopt;

        auto size = std::uniform_int_distribution<size_t>(3, 6)(rng);
        auto count = std::uniform_int_distribution<size_t>(1, 4)(rng);
        Instance inst;
        for (size_t e = 0 ; e < size ; ++e)
            inst.elements.push_back("e" + std::to_string(e));
        for (size_t c = 0 ; c < count ; ++c) {
            auto & r = *rels[std::uniform_int_distribution<size_t>(0, rels.size() - 1)(rng)];
            if (r.arity() > size)
                continue;
            vector<size_t> pool(size);
            for (size_t e = 0 ; e < size ; ++e)
                pool[e] = e;
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(r.arity());
            inst.constraints.push_back(Constraint{ r.name, pool });
        }
        try {
            return normalize_instance(inst, t);
        }
        catch (const Error & e) {
            if (e.code() == ErrorCode::ContradictoryInstance)
                return std::nullopt;
            throw;
        }
    }

    auto first_helly_anomaly(const Instance & i, const CosetTemplate & t, const SolveOptions & options) -> optional<AnomalyWitness>
    {
        for (size_t j = 3 ; j <= i.size() ; ++j)
            if (auto w = find_kj_anomaly(i, t, 2, j, options))
                return w;
        return std::nullopt;
    }
}

auto cosetcsp::helly_pipeline(CosetTemplate & t, const optional<Instance> & witness, const optional<Assignment> & anomaly,
        const PipelineOptions & options) -> optional<PipelineResult>
{
    optional<AnomalyWitness> start;
    if (witness) {
        auto inst = normalize_instance(*witness, t);
        if (anomaly) {
            Assignment h(inst.size());
            for (auto e : anomaly->domain())
                h.set(inst.index_of(witness->elements.at(e)), anomaly->at(e));
            if (! is_anomaly(inst, t, h, 2, options.solve))
                throw Error(ErrorCode::NotAnAnomaly, "supplied assignment is not a (2, j)-anomaly");
            start = AnomalyWitness{ inst, h, 2, h.domain_size() };
        }
        else
            start = first_helly_anomaly(inst, t, options.solve);
    }
    else {
        bool helly = false;
        try {
            helly = find_majority_polymorphism(t).has_value();
        }
        catch (const Error & e) {
            if (e.code() != ErrorCode::BudgetExceeded)
                throw;
        }
        if (helly)
            return std::nullopt;
        std::mt19937_64 rng(options.seed);
        for (std::uint64_t attempt = 0 ; attempt < options.search_budget && ! start ; ++attempt)
            if (auto inst = random_instance(t, rng) ; inst && solve(*inst, t, options.solve))
                start = first_helly_anomaly(*inst, t, options.solve);
    }
    if (! start)
        return std::nullopt;

    vector<AnomalyWitness> chain{ *start };
    size_t reductions = 0;

    auto shifted = normalize_subgroup_instance(start->instance, t, options.solve);
    auto moved_h = act_assignment(start->instance, t, start->h, shifted.shift);
    chain.push_back(AnomalyWitness{ shifted.instance, moved_h, 2, start->j });

    auto current = shrink_anomaly(shifted.instance, t, moved_h, options.solve);
    chain.push_back(current);
    while (current.k > 2) {
        current = reduce_anomaly_step(current.instance, t, current.h, current.k, options.solve);
        ++reductions;
        chain.push_back(current);
    }

    auto extraction = build_adp_from_anomaly(current.instance, t, current.h, options.solve);
    return PipelineResult{ std::move(extraction), std::move(chain), reductions };
}
