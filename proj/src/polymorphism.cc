#include <cosetcsp/error.hpp>
#include <cosetcsp/polymorphism.hpp>

#include <algorithm>
#include <map>
#include <set>

using namespace cosetcsp;

using std::optional;
using std::size_t;
using std::vector;

namespace
{
    struct Preserved
    {
        vector<size_t> carriers; // carrier index per coordinate
        CosetSet set;
    };

    auto carrier_index(const CosetTemplate & t, const std::string & name) -> size_t
    {
        auto & cs = t.carriers();
        for (size_t c = 0 ; c < cs.size() ; ++c)
            if (cs[c].first == name)
                return c;
        throw Error(ErrorCode::UnknownCarrier, name);
    }

    auto relations_to_preserve(const CosetTemplate & t, bool include_translates) -> vector<Preserved>
    {
        vector<Preserved> result;
        for (auto & [name, r] : t.relations()) {
            vector<size_t> carriers;
            for (auto & s : r.signature)
                carriers.push_back(carrier_index(t, s));
            if (! include_translates || ! r.set.is_coset()) {
                result.push_back(Preserved{ carriers, r.set });
                continue;
            }
            std::set<vector<Tuple>> seen;
            for (auto & pi : r.set.ambient().elements()) {
                auto moved = translate(r.set, pi);
                if (seen.insert(moved.members()).second)
                    result.push_back(Preserved{ carriers, std::move(moved) });
            }
        }
        return result;
    }

    struct Layout
    {
        vector<size_t> offsets;
        vector<size_t> carrier_of;
        size_t universe = 0;

        explicit Layout(const CosetTemplate & t)
        {
            for (size_t c = 0 ; c < t.carriers().size() ; ++c) {
                offsets.push_back(universe);
                universe += t.carriers()[c].second->order();
                carrier_of.resize(universe, c);
            }
        }

        auto key(size_t x, size_t y, size_t z) const -> size_t { return (x * universe + y) * universe + z; }
    };

    // value forced by the majority identities, or the first argument for mixed carriers
    auto forced_value(const Layout & l, size_t x, size_t y, size_t z) -> optional<size_t>
    {
        if (x == y || x == z)
            return x;
        if (y == z)
            return y;
        if (l.carrier_of[x] != l.carrier_of[y] || l.carrier_of[x] != l.carrier_of[z])
            return x;
        return std::nullopt;
    }

    auto preserves_all(const vector<Preserved> & rels, const Layout & l, const TernaryOperation & m) -> bool
    {
        for (auto & p : rels) {
            auto & members = p.set.members();
            Tuple image(p.carriers.size());
            for (auto & r1 : members)
                for (auto & r2 : members)
                    for (auto & r3 : members) {
                        bool in_carrier = true;
                        for (size_t k = 0 ; k < image.size() ; ++k) {
                            auto off = l.offsets[p.carriers[k]];
                            auto v = m(off + r1[k], off + r2[k], off + r3[k]);
                            if (l.carrier_of[v] != p.carriers[k]) {
                                in_carrier = false;
                                break;
                            }
                            image[k] = static_cast<Element>(v - off);
                        }
                        if (! in_carrier || ! p.set.contains(image))
                            return false;
                    }
        }
        return true;
    }
}

auto cosetcsp::find_majority_polymorphism(const CosetTemplate & t, const PolymorphismOptions & options)
    -> optional<TernaryOperation>
{
    Layout layout(t);
    auto u = layout.universe;
    TernaryOperation m{ layout.offsets, u, vector<size_t>(u * u * u, 0) };

    // free variables: pairwise distinct triples inside one carrier
    std::map<size_t, size_t> var_of_key;
    vector<size_t> var_key, var_carrier;
    for (size_t x = 0 ; x < u ; ++x)
        for (size_t y = 0 ; y < u ; ++y)
            for (size_t z = 0 ; z < u ; ++z) {
                auto f = forced_value(layout, x, y, z);
                if (f)
                    m.table[layout.key(x, y, z)] = *f;
                else {
                    var_of_key.emplace(layout.key(x, y, z), var_key.size());
                    var_key.push_back(layout.key(x, y, z));
                    var_carrier.push_back(layout.carrier_of[x]);
                }
            }

    // each preservation requirement: a tuple of keys whose image must land in a relation
    struct Requirement
    {
        vector<size_t> keys;
        const Preserved * rel;
    };
    auto rels = relations_to_preserve(t, options.include_translates);
    vector<vector<Requirement>> checks_at(var_key.size());
    for (auto & p : rels) {
        std::set<vector<size_t>> seen;
        auto & members = p.set.members();
        for (auto & r1 : members)
            for (auto & r2 : members)
                for (auto & r3 : members) {
                    vector<size_t> keys;
                    long last_var = -1;
                    for (size_t k = 0 ; k < p.carriers.size() ; ++k) {
                        auto off = layout.offsets[p.carriers[k]];
                        auto key = layout.key(off + r1[k], off + r2[k], off + r3[k]);
                        keys.push_back(key);
                        if (auto it = var_of_key.find(key) ; it != var_of_key.end())
                            last_var = std::max(last_var, static_cast<long>(it->second));
                    }
                    if (! seen.insert(keys).second)
                        continue;
                    if (last_var == -1) {
                        Tuple image;
                        for (size_t k = 0 ; k < keys.size() ; ++k)
                            image.push_back(static_cast<Element>(m.table[keys[k]] - layout.offsets[p.carriers[k]]));
                        if (! p.set.contains(image))
                            return std::nullopt;
                    }
                    else
                        checks_at[static_cast<size_t>(last_var)].push_back(Requirement{ std::move(keys), &p });
                }
    }

    auto satisfied = [&] (const Requirement & req) {
        Tuple image(req.keys.size());
        for (size_t k = 0 ; k < req.keys.size() ; ++k) {
            auto off = layout.offsets[req.rel->carriers[k]];
            auto v = m.table[req.keys[k]];
            if (layout.carrier_of[v] != req.rel->carriers[k])
                return false;
            image[k] = static_cast<Element>(v - off);
        }
        return req.rel->set.contains(image);
    };

    std::uint64_t nodes = 0;
    auto search = [&] (auto & self, size_t var) -> bool {
        if (var == var_key.size())
            return true;
        auto c = var_carrier[var];
        auto off = layout.offsets[c];
        auto size = t.carriers()[c].second->order();
        for (size_t v = off ; v < off + size ; ++v) {
            if (++nodes > options.node_budget)
                throw Error(ErrorCode::BudgetExceeded, "majority polymorphism search");
            m.table[var_key[var]] = v;
            if (std::all_of(checks_at[var].begin(), checks_at[var].end(), satisfied) && self(self, var + 1))
                return true;
        }
        return false;
    };

    if (! search(search, 0))
        return std::nullopt;
    return m;
}

auto cosetcsp::is_majority_polymorphism(const CosetTemplate & t, const TernaryOperation & m, bool include_translates) -> bool
{
    Layout layout(t);
    if (m.universe != layout.universe || m.table.size() != m.universe * m.universe * m.universe)
        return false;
    for (size_t x = 0 ; x < m.universe ; ++x)
        for (size_t y = 0 ; y < m.universe ; ++y)
            if (m(x, x, y) != x || m(x, y, x) != x || m(y, x, x) != x)
                return false;
    return preserves_all(relations_to_preserve(t, include_translates), layout, m);
}
