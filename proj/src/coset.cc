#include <cosetcsp/coset.hpp>
#include <cosetcsp/error.hpp>

#include <algorithm>
#include <deque>
#include <set>

using namespace cosetcsp;

using std::size_t;
using std::vector;

auto cosetcsp::to_string(CosetKind kind) -> const char *
{
    switch (kind) {
        case CosetKind::NotCoset: return "NotCoset";
        case CosetKind::Coset: return "Coset";
        case CosetKind::Subgroup: return "Subgroup";
    }
    return "?";
}

CosetSet::CosetSet(ProductGroup ambient, vector<Tuple> sorted_members, CosetKind kind) :
    _ambient(std::move(ambient)),
    _members(std::move(sorted_members)),
    _kind(kind)
{
}

auto CosetSet::contains(const Tuple & t) const -> bool
{
    return std::binary_search(_members.begin(), _members.end(), t);
}

auto CosetSet::operator== (const CosetSet & other) const -> bool
{
    return _members == other._members && _ambient == other._ambient;
}

namespace
{
    auto sorted_contains(const vector<Tuple> & v, const Tuple & t) -> bool
    {
        return std::binary_search(v.begin(), v.end(), t);
    }

    // A finite nonempty set closed under the operation is a subgroup.
    auto closed_under_op(const ProductGroup & g, const vector<Tuple> & sorted) -> bool
    {
        for (auto & x : sorted)
            for (auto & y : sorted)
                if (! sorted_contains(sorted, g.op(x, y)))
                    return false;
        return true;
    }
}

auto cosetcsp::classify_subset(const ProductGroup & ambient, vector<Tuple> members) -> CosetSet
{
    if (members.empty())
        throw Error(ErrorCode::EmptySet, "classify_subset on an empty set");
    for (auto & m : members)
        if (! ambient.contains(m))
            throw Error(ErrorCode::PreconditionViolated, "member outside the ambient group");

    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    // S is a right coset Hg iff S g^-1 is a subgroup, for any g in S.
    auto g_inv = ambient.inverse(members.front());
    vector<Tuple> shifted;
    shifted.reserve(members.size());
    for (auto & m : members)
        shifted.push_back(ambient.op(m, g_inv));
    std::sort(shifted.begin(), shifted.end());

    auto kind = CosetKind::NotCoset;
    if (closed_under_op(ambient, shifted))
        kind = sorted_contains(members, ambient.identity()) ? CosetKind::Subgroup : CosetKind::Coset;

    return CosetSet{ ambient, std::move(members), kind };
}

auto cosetcsp::generate_subgroup(const ProductGroup & ambient, const vector<Tuple> & generators) -> CosetSet
{
    std::set<Tuple> seen{ ambient.identity() };
    std::deque<Tuple> queue{ ambient.identity() };
    for (auto & g : generators)
        if (! ambient.contains(g))
            throw Error(ErrorCode::PreconditionViolated, "generator outside the ambient group");

    // right multiplication by generators reaches every element of a finite group's subgroup
    while (! queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        for (auto & g : generators) {
            auto y = ambient.op(x, g);
            if (seen.insert(y).second)
                queue.push_back(y);
        }
    }
    return classify_subset(ambient, vector<Tuple>(seen.begin(), seen.end()));
}

auto cosetcsp::translate(const CosetSet & c, const Tuple & pi) -> CosetSet
{
    if (! c.is_coset())
        throw Error(ErrorCode::NotCosetInput, "translate of a non-coset");
    if (! c.ambient().contains(pi))
        throw Error(ErrorCode::PreconditionViolated, "translation outside the ambient group");
    vector<Tuple> moved;
    moved.reserve(c.size());
    for (auto & m : c.members())
        moved.push_back(c.ambient().op(m, pi));
    return classify_subset(c.ambient(), std::move(moved));
}

auto cosetcsp::is_malcev_closed(const ProductGroup & ambient, std::span<const Tuple> sorted_members) -> bool
{
    vector<Tuple> s(sorted_members.begin(), sorted_members.end());
    for (auto & x : s)
        for (auto & y : s) {
            auto xyi = ambient.op(x, ambient.inverse(y));
            for (auto & z : s)
                if (! sorted_contains(s, ambient.op(xyi, z)))
                    return false;
        }
    return true;
}

auto cosetcsp::intersect_members(const CosetSet & a, const CosetSet & b) -> vector<Tuple>
{
    vector<Tuple> result;
    std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
            std::back_inserter(result));
    return result;
}

auto cosetcsp::single_factor(const GroupPtr & g) -> ProductGroup
{
    return ProductGroup{ { g } };
}

auto cosetcsp::embed_subgroup(const CosetSet & subgroup) -> EmbeddedSubgroup
{
    if (! subgroup.is_subgroup() || subgroup.ambient().arity() != 1)
        throw Error(ErrorCode::NotSubgroup, "embed_subgroup expects a subgroup of a single group");

    auto & parent = subgroup.ambient().factor(0);
    EmbeddedSubgroup result;
    result.from_parent.assign(parent.order(), -1);
    for (auto & m : subgroup.members()) {
        result.from_parent[m[0]] = static_cast<long>(result.to_parent.size());
        result.to_parent.push_back(m[0]);
    }

    auto n = result.to_parent.size();
    vector<vector<long long>> table(n, vector<long long>(n));
    for (size_t a = 0 ; a < n ; ++a)
        for (size_t b = 0 ; b < n ; ++b)
            table[a][b] = result.from_parent[parent.op(result.to_parent[a], result.to_parent[b])];
    result.group = std::make_shared<const FiniteGroup>(FiniteGroup::from_table(table, parent.label() + "|sub"));
    return result;
}
