#include "combinations.hh"
#include "compiled.hh"

#include <cosetcsp/consistency.hpp>
#include <cosetcsp/error.hpp>

#include <algorithm>

using namespace cosetcsp;
using namespace cosetcsp::innards;

using std::size_t;
using std::vector;

auto Family::encode(const Tuple & values) const -> size_t
{
    size_t index = 0;
    for (size_t p = 0 ; p < radices.size() ; ++p)
        index = index * radices[p] + values[p];
    return index;
}

auto Family::decode(size_t index) const -> Tuple
{
    Tuple result(radices.size());
    for (size_t p = radices.size() ; p-- > 0 ; ) {
        result[p] = static_cast<Element>(index % radices[p]);
        index /= radices[p];
    }
    return result;
}

auto Family::members() const -> vector<Tuple>
{
    vector<Tuple> result;
    for (size_t x = 0 ; x < member.size() ; ++x)
        if (member[x])
            result.push_back(decode(x));
    return result;
}

ConsistencyFamilies::ConsistencyFamilies(size_t element_count, size_t k) :
    _element_count(element_count),
    _k(std::min(k, element_count))
{
    _binomial.assign(element_count + 1, vector<std::uint64_t>(_k + 2, 0));
    for (size_t n = 0 ; n <= element_count ; ++n) {
        _binomial[n][0] = 1;
        for (size_t r = 1 ; r <= _k + 1 && r <= n ; ++r)
            _binomial[n][r] = _binomial[n - 1][r - 1] + (r < n ? _binomial[n - 1][r] : 0);
    }
    _size_offset.assign(_k + 2, 0);
    for (size_t s = 1 ; s <= _k ; ++s)
        _size_offset[s + 1] = _size_offset[s] + _binomial[element_count][s];
    _families.resize(_size_offset[_k + 1]);
}

auto ConsistencyFamilies::index_of(const vector<size_t> & x) const -> size_t
{
    if (x.empty() || x.size() > _k)
        throw Error(ErrorCode::PreconditionViolated, "no family for a subset of this size");
    size_t index = _size_offset[x.size()];
    for (size_t p = 0 ; p < x.size() ; ++p)
        if (x[p] >= p + 1)
            index += _binomial[x[p]][p + 1];
    return index;
}

auto ConsistencyFamilies::total_size() const -> size_t
{
    size_t total = 0;
    for (auto & f : _families)
        total += f.count;
    return total;
}

auto ConsistencyFamilies::all_nonempty() const -> bool
{
    return std::all_of(_families.begin(), _families.end(), [] (const Family & f) { return f.count != 0; });
}

auto ConsistencyFamilies::operator== (const ConsistencyFamilies & other) const -> bool
{
    if (_element_count != other._element_count || _k != other._k || _families.size() != other._families.size())
        return false;
    for (size_t x = 0 ; x < _families.size() ; ++x)
        if (_families[x].elements != other._families[x].elements || _families[x].member != other._families[x].member)
            return false;
    return true;
}

namespace
{
    /// Scratch state shared by every window of one run.
    struct Windows
    {
        const CompiledInstance & ci;
        vector<size_t> min_arg;
        vector<long> values;
        vector<char> in_window;

        explicit Windows(const CompiledInstance & c) :
            ci(c),
            values(c.size(), -1),
            in_window(c.size(), 0)
        {
            for (auto & cc : ci.constraints)
                min_arg.push_back(cc.args.empty() ? 0 : *std::min_element(cc.args.begin(), cc.args.end()));
        }

        auto inside(const vector<size_t> & y) -> vector<size_t>
        {
            for (auto e : y)
                in_window[e] = 1;
            vector<size_t> result;
            for (auto e : y)
                for (auto c : ci.incident[e]) {
                    auto & args = ci.constraints[c].args;
                    if (min_arg[c] == e && std::all_of(args.begin(), args.end(), [&] (size_t a) { return in_window[a]; }))
                        result.push_back(c);
                }
            for (auto e : y)
                in_window[e] = 0;
            return result;
        }

        auto radices(const vector<size_t> & y) const -> vector<size_t>
        {
            vector<size_t> result;
            for (auto e : y)
                result.push_back(ci.groups[e]->order());
            return result;
        }

        /// Calls f(tuple) for every assignment on y satisfying the constraints inside y.
        template <typename F_>
        auto for_each_partial_solution(const vector<size_t> & y, F_ && f) -> void
        {
            auto cons = inside(y);
            auto rad = radices(y);
            std::uint64_t total = 1;
            for (auto r : rad) {
                total *= r;
                if (total > max_bitmap_order)
                    throw Error(ErrorCode::CapExceeded, "consistency window too large");
            }
            Tuple t(y.size(), 0);
            for (std::uint64_t n = 0 ; n < total ; ++n) {
                for (size_t p = 0 ; p < y.size() ; ++p)
                    values[y[p]] = t[p];
                bool ok = std::all_of(cons.begin(), cons.end(), [&] (size_t c) { return ci.constraints[c].holds(values); });
                if (ok)
                    f(static_cast<const Tuple &>(t));
                for (size_t p = y.size() ; p-- > 0 ; ) {
                    if (++t[p] < rad[p])
                        break;
                    t[p] = 0;
                }
            }
            for (auto e : y)
                values[e] = -1;
        }
    };

    auto restrict_tuple(const Tuple & t, const vector<size_t> & positions) -> Tuple
    {
        Tuple r;
        r.reserve(positions.size());
        for (auto p : positions)
            r.push_back(t[p]);
        return r;
    }

    /// Assignments on Y that are partial solutions with every small restriction in a family.
    auto good_on_window(const ConsistencyFamilies & f, Windows & w, const vector<size_t> & y,
            const vector<vector<size_t>> & subsets, const vector<size_t> & family_ids) -> vector<Tuple>
    {
        vector<Tuple> good;
        for (auto id : family_ids)
            if (f.families()[id].count == 0)
                return good;
        w.for_each_partial_solution(y, [&] (const Tuple & t) {
                for (size_t s = 0 ; s < subsets.size() ; ++s)
                    if (! f.families()[family_ids[s]].contains(restrict_tuple(t, subsets[s])))
                        return;
                good.push_back(t);
                });
        return good;
    }

    /// Intersects the family with the projections of `good`; returns removals.
    auto filter_family(Family & fam, const vector<Tuple> & good, const vector<size_t> & positions) -> size_t
    {
        if (fam.count == 0)
            return 0;
        vector<char> keep(fam.member.size(), 0);
        for (auto & t : good)
            keep[fam.encode(restrict_tuple(t, positions))] = 1;
        size_t removed = 0;
        for (size_t x = 0 ; x < keep.size() ; ++x)
            if (fam.member[x] && ! keep[x]) {
                fam.member[x] = 0;
                ++removed;
            }
        fam.count -= removed;
        return removed;
    }

    auto ids_for_window(const ConsistencyFamilies & f, const vector<size_t> & y, const vector<vector<size_t>> & subsets) -> vector<size_t>
    {
        vector<size_t> ids;
        for (auto & s : subsets)
            ids.push_back(f.index_of(pick(y, s)));
        return ids;
    }

    auto init_with(const CompiledInstance & ci, size_t k) -> ConsistencyFamilies
    {
        ConsistencyFamilies result(ci.size(), k);
        Windows w(ci);
        for (size_t s = 1 ; s <= result.k() ; ++s)
            for_each_combination(ci.size(), s, [&] (const vector<size_t> & x) {
                    auto & fam = result.families()[result.index_of(x)];
                    fam.elements = x;
                    fam.radices = w.radices(x);
                    size_t total = 1;
                    for (auto r : fam.radices)
                        total *= r;
                    fam.member.assign(total, 0);
                    w.for_each_partial_solution(x, [&] (const Tuple & t) {
                            fam.member[fam.encode(t)] = 1;
                            ++fam.count;
                            });
                    return true;
                    });
        return result;
    }
}

auto cosetcsp::init_families(const Instance & i, const CosetTemplate & t, size_t k) -> ConsistencyFamilies
{
    return init_with(CompiledInstance(i, t), k);
}

Schedule::Schedule(size_t element_count, size_t k, size_t l) :
    _element_count(element_count),
    _k(k),
    _l(l)
{
    if (k > l)
        throw Error(ErrorCode::PreconditionViolated, "schedule needs k <= l");
    auto m = window_size();
    for (size_t s = 1 ; s <= std::min(k, m) ; ++s)
        for_each_combination(m, s, [&] (const vector<size_t> & c) {
                _positions.push_back(c);
                return true;
                });
    std::sort(_positions.begin(), _positions.end());
}

auto Schedule::window_size() const -> size_t
{
    return std::min(_l, _element_count);
}

auto Schedule::size() const -> std::uint64_t
{
    auto m = window_size();
    std::uint64_t windows = 1;
    for (size_t r = 0 ; r < m ; ++r)
        windows = windows * (_element_count - r) / (r + 1);
    return windows * _positions.size();
}

auto Schedule::for_each_window(const std::function<bool (const vector<size_t> &, const vector<vector<size_t>> &)> & f) const -> bool
{
    return for_each_combination(_element_count, window_size(), [&] (const vector<size_t> & y) {
            return f(y, _positions);
            });
}

auto Schedule::pairs() const -> vector<std::pair<vector<size_t>, vector<size_t>>>
{
    vector<std::pair<vector<size_t>, vector<size_t>>> result;
    for_each_window([&] (const vector<size_t> & y, const vector<vector<size_t>> & subsets) {
            for (auto & s : subsets)
                result.emplace_back(pick(y, s), y);
            return true;
            });
    return result;
}

auto cosetcsp::build_schedule(size_t element_count, size_t k, size_t l) -> Schedule
{
    return Schedule(element_count, k, l);
}

auto cosetcsp::refine_step(ConsistencyFamilies & f, const vector<size_t> & x, const vector<size_t> & y,
        const Instance & i, const CosetTemplate & t) -> size_t
{
    if (! std::includes(y.begin(), y.end(), x.begin(), x.end()))
        throw Error(ErrorCode::PreconditionViolated, "X must be a subset of Y");
    CompiledInstance ci(i, t);
    Windows w(ci);
    vector<vector<size_t>> subsets;
    for (size_t s = 1 ; s <= std::min(f.k(), y.size()) ; ++s)
        for_each_combination(y.size(), s, [&] (const vector<size_t> & c) {
                subsets.push_back(c);
                return true;
                });
    auto good = good_on_window(f, w, y, subsets, ids_for_window(f, y, subsets));
    vector<size_t> positions;
    for (auto e : x)
        positions.push_back(static_cast<size_t>(std::find(y.begin(), y.end(), e) - y.begin()));
    return filter_family(f.families()[f.index_of(x)], good, positions);
}

auto cosetcsp::run_kl_consistency(const Instance & i, const CosetTemplate & t, size_t k, size_t l,
        const ConsistencyOptions & options) -> ConsistencyResult
{
    if (k == 0 || k > l)
        throw Error(ErrorCode::PreconditionViolated, "consistency needs 1 <= k <= l");
    CompiledInstance ci(i, t);
    ConsistencyResult result{ false, false, init_with(ci, k), std::nullopt, {}, {}, 0, 0, std::nullopt };
    if (options.record_trace)
        result.initial = result.families;

    Schedule schedule(ci.size(), k, l);
    Windows w(ci);
    auto & families = result.families;
    auto total = families.total_size();
    if (total == 0 && ci.size() != 0)
        result.emptied_at = 0;

    while (! result.emptied_at) {
        ++result.passes;
        size_t removed = 0;
        schedule.for_each_window([&] (const vector<size_t> & y, const vector<vector<size_t>> & subsets) {
                // the good assignments on Y only lose members whose restrictions were
                // already removed, so one computation serves every stage of this window
                auto ids = ids_for_window(families, y, subsets);
                auto good = good_on_window(families, w, y, subsets, ids);
                for (size_t s = 0 ; s < subsets.size() ; ++s) {
                    ++result.stages;
                    auto & fam = families.families()[ids[s]];
                    auto before = fam.count;
                    auto r = filter_family(fam, good, subsets[s]);
                    if (r == 0)
                        continue;
                    removed += r;
                    total -= r;
                    if (options.record_trace)
                        result.trace.push_back(TraceEntry{ result.stages, result.passes, ids[s], before, fam });
                    if (total == 0) {
                        result.emptied_at = result.stages;
                        return false;
                    }
                }
                return true;
                });
        result.removed_per_pass.push_back(removed);
        if (removed == 0)
            break;
    }

    // with no elements the empty assignment is a solution
    result.accept = ci.size() == 0 || families.any_nonempty();
    result.all_nonempty = families.all_nonempty();
    return result;
}

auto cosetcsp::act_family(const Family & f, const Instance & i, const CosetTemplate & t, const Assignment & s) -> Family
{
    auto groups = constraining_groups(i, t);
    Family result = f;
    std::fill(result.member.begin(), result.member.end(), 0);
    for (size_t x = 0 ; x < f.member.size() ; ++x)
        if (f.member[x]) {
            auto values = f.decode(x);
            for (size_t p = 0 ; p < values.size() ; ++p)
                values[p] = groups[f.elements[p]]->op(values[p], s.at(f.elements[p]));
            result.member[result.encode(values)] = 1;
        }
    return result;
}

namespace
{
    auto same_under_action(const Family & a, const Family & b, const Instance & i, const CosetTemplate & t, const Assignment & s) -> bool
    {
        return a.elements == b.elements && a.count == b.count && act_family(a, i, t, s).member == b.member;
    }
}

auto cosetcsp::check_equivariance(const Instance & i, CosetTemplate & t, const Assignment & s, size_t k, size_t l) -> bool
{
    ConsistencyOptions traced{ true };
    auto moved = act_instance(i, s, t);
    auto a = run_kl_consistency(i, t, k, l, traced);
    auto b = run_kl_consistency(moved, t, k, l, traced);

    if (a.accept != b.accept || a.passes != b.passes || a.stages != b.stages || a.trace.size() != b.trace.size())
        return false;
    for (size_t x = 0 ; x < a.initial->families().size() ; ++x)
        if (! same_under_action(a.initial->families()[x], b.initial->families()[x], i, t, s))
            return false;
    for (size_t e = 0 ; e < a.trace.size() ; ++e) {
        auto & p = a.trace[e];
        auto & q = b.trace[e];
        if (p.stage != q.stage || p.family != q.family || p.before != q.before || ! same_under_action(p.after, q.after, i, t, s))
            return false;
    }
    return true;
}

auto cosetcsp::check_locality(const ConsistencyFamilies & f, const Instance & i, const CosetTemplate & t, const Assignment & s) -> bool
{
    auto groups = constraining_groups(i, t);
    for (auto & fam : f.families()) {
        bool fixes = std::all_of(fam.elements.begin(), fam.elements.end(), [&] (size_t e) {
                return s.at(e) == groups[e]->identity();
                });
        if (fixes && act_family(fam, i, t, s).member != fam.member)
            return false;
    }
    return true;
}
