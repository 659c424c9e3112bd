#include "compiled.hh"

#include <cosetcsp/error.hpp>

using namespace cosetcsp;
using namespace cosetcsp::innards;

using std::size_t;
using std::vector;

auto CompiledConstraint::holds(const vector<long> & values) const -> bool
{
    if (! member.empty()) {
        std::uint64_t index = 0;
        for (size_t k = 0 ; k < args.size() ; ++k)
            index += strides[k] * static_cast<std::uint64_t>(values[args[k]]);
        return member[index];
    }
    Tuple t(args.size());
    for (size_t k = 0 ; k < args.size() ; ++k)
        t[k] = static_cast<Element>(values[args[k]]);
    return set.contains(t);
}

auto CompiledConstraint::supported(const vector<long> & values) const -> bool
{
    for (auto & m : set.members()) {
        bool agrees = true;
        for (size_t k = 0 ; k < args.size() && agrees ; ++k) {
            auto v = values[args[k]];
            agrees = v < 0 || static_cast<Element>(v) == m[k];
        }
        if (agrees)
            return true;
    }
    return false;
}

CompiledInstance::CompiledInstance(const Instance & i, const CosetTemplate & t) :
    groups(constraining_groups(i, t)),
    incident(i.size())
{
    if (! i.pp_constraints.empty())
        throw Error(ErrorCode::PreconditionViolated, "pp-constraints must be expanded before solving");

    for (auto & c : i.constraints) {
        auto & r = t.relation(c.relation);
        CompiledConstraint cc{ c.args, r.set, vector<std::uint64_t>(c.args.size()), {} };
        std::uint64_t stride = 1;
        for (size_t k = c.args.size() ; k-- > 0 ; ) {
            cc.strides[k] = stride;
            stride *= r.set.ambient().factor(k).order();
        }
        auto order = r.set.ambient().order();
        if (order <= max_bitmap_order) {
            cc.member.assign(order, 0);
            for (auto & m : r.set.members())
                cc.member[r.set.ambient().encode(m)] = 1;
        }
        for (auto a : c.args)
            if (incident[a].empty() || incident[a].back() != constraints.size())
                incident[a].push_back(constraints.size());
        constraints.push_back(std::move(cc));
    }
}
