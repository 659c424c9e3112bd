#include <cosetcsp/adp.hpp>
#include <cosetcsp/error.hpp>

#include <algorithm>
#include <map>

using namespace cosetcsp;

using std::size_t;
using std::vector;

auto cosetcsp::to_string(AdpKind kind) -> const char *
{
    switch (kind) {
        case AdpKind::NotADP: return "NotADP";
        case AdpKind::ADP: return "ADP";
        case AdpKind::StrictADP: return "StrictADP";
    }
    return "?";
}

namespace
{
    auto require_ternary_subgroup(const CosetSet & h, const char * what) -> void
    {
        if (! h.is_subgroup())
            throw Error(ErrorCode::NotSubgroup, what);
        if (h.ambient().arity() != 3)
            throw Error(ErrorCode::PreconditionViolated, std::string(what) + ": expected a 3-factor product");
    }
}

auto cosetcsp::component_kernel(const CosetSet & h, size_t i) -> CosetSet
{
    if (! h.is_subgroup())
        throw Error(ErrorCode::NotSubgroup, "component_kernel");
    if (i >= h.ambient().arity())
        throw Error(ErrorCode::PreconditionViolated, "component_kernel: coordinate out of range");

    auto id = h.ambient().identity();
    vector<Tuple> kernel;
    for (auto & m : h.members()) {
        bool others_trivial = true;
        for (size_t j = 0 ; j < m.size() ; ++j)
            if (j != i && m[j] != id[j])
                others_trivial = false;
        if (others_trivial)
            kernel.push_back(Tuple{ m[i] });
    }
    return classify_subset(single_factor(h.ambient().factor_ptr(i)), std::move(kernel));
}

auto cosetcsp::classify_almost_direct(const CosetSet & h) -> AdpKind
{
    require_ternary_subgroup(h, "classify_almost_direct");
    auto & amb = h.ambient();
    if (h.size() == amb.order())
        return AdpKind::NotADP;

    bool strict = true;
    // for each coordinate i, count completions of every pair of the other two coordinates
    for (size_t i = 0 ; i < 3 ; ++i) {
        size_t p = (i + 1) % 3, q = (i + 2) % 3;
        auto np = amb.factor(p).order(), nq = amb.factor(q).order();
        vector<size_t> count(np * nq, 0);
        for (auto & m : h.members())
            ++count[m[p] * nq + m[q]];
        for (auto c : count) {
            if (c == 0)
                return AdpKind::NotADP;
            if (c > 1)
                strict = false;
        }
    }
    return strict ? AdpKind::StrictADP : AdpKind::ADP;
}

auto cosetcsp::quotient(const GroupPtr & g, const CosetSet & normal_subgroup) -> QuotientMap
{
    if (! normal_subgroup.is_subgroup() || normal_subgroup.ambient().arity() != 1
            || normal_subgroup.ambient().factor(0) != *g)
        throw Error(ErrorCode::NotSubgroup, "quotient: kernel must be a subgroup of the source group");

    auto n = g->order();
    vector<long> class_of(n, -1);
    vector<Element> representatives;
    for (Element x = 0 ; x < n ; ++x) {
        if (class_of[x] != -1)
            continue;
        auto id = static_cast<long>(representatives.size());
        representatives.push_back(x);
        for (auto & k : normal_subgroup.members())
            class_of[g->op(k[0], x)] = id;
    }

    // normality: left and right cosets agree, so x N = N x for every x
    for (Element x = 0 ; x < n ; ++x)
        for (auto & k : normal_subgroup.members())
            if (class_of[g->op(x, k[0])] != class_of[x])
                throw Error(ErrorCode::NotSubgroup, "quotient: kernel is not normal");

    auto m = representatives.size();
    vector<vector<long long>> table(m, vector<long long>(m));
    for (size_t a = 0 ; a < m ; ++a)
        for (size_t b = 0 ; b < m ; ++b)
            table[a][b] = class_of[g->op(representatives[a], representatives[b])];

    QuotientMap result{ g, normal_subgroup,
        std::make_shared<const FiniteGroup>(FiniteGroup::from_table(table, g->label() + "/N")), {} };
    result.projection.reserve(n);
    for (auto c : class_of)
        result.projection.push_back(static_cast<Element>(c));
    return result;
}

auto AdpQuotient::project(const Tuple & t) const -> Tuple
{
    return Tuple{ maps[0](t[0]), maps[1](t[1]), maps[2](t[2]) };
}

auto cosetcsp::quotient_adp(const CosetSet & h) -> AdpQuotient
{
    require_ternary_subgroup(h, "quotient_adp");
    if (classify_almost_direct(h) == AdpKind::NotADP)
        throw Error(ErrorCode::NotADPInput, "quotient_adp expects an almost-direct product");

    auto & amb = h.ambient();
    auto map_for = [&] (size_t i) { return quotient(amb.factor_ptr(i), component_kernel(h, i)); };
    std::array<QuotientMap, 3> maps{ map_for(0), map_for(1), map_for(2) };
    ProductGroup target{ { maps[0].target, maps[1].target, maps[2].target } };

    vector<Tuple> image;
    image.reserve(h.size());
    for (auto & m : h.members())
        image.push_back(Tuple{ maps[0](m[0]), maps[1](m[1]), maps[2](m[2]) });
    auto image_set = classify_subset(target, std::move(image));

    if (classify_almost_direct(image_set) != AdpKind::StrictADP)
        throw Error(ErrorCode::AssertionFailure, "quotient of an almost-direct product is not strict");

    return AdpQuotient{ std::move(maps), std::move(target), std::move(image_set) };
}

auto cosetcsp::is_commutative(const CosetSet & subgroup) -> bool
{
    if (! subgroup.is_subgroup())
        throw Error(ErrorCode::NotSubgroup, "is_commutative");
    auto & amb = subgroup.ambient();
    auto & m = subgroup.members();
    for (size_t a = 0 ; a < m.size() ; ++a)
        for (size_t b = a + 1 ; b < m.size() ; ++b)
            if (amb.op(m[a], m[b]) != amb.op(m[b], m[a]))
                return false;
    return true;
}

auto cosetcsp::equivalence_class(const CosetSet & h, size_t i, Element x) -> Element
{
    auto kernel = component_kernel(h, i);
    auto & g = h.ambient().factor(i);
    auto least = g.op(kernel.members().front()[0], x);
    for (auto & k : kernel.members())
        least = std::min(least, g.op(k[0], x));
    return least;
}
