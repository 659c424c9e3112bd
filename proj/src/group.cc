#include <cosetcsp/error.hpp>
#include <cosetcsp/group.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::to_string;
using std::vector;

auto FiniteGroup::from_table(const vector<vector<long long>> & table, string label, size_t max_order) -> FiniteGroup
{
    auto n = table.size();
    if (n == 0)
        throw Error(ErrorCode::NotAGroup, "empty table");
    if (n > max_order)
        throw Error(ErrorCode::NotAGroup, "order " + std::to_string(n) + " exceeds cap " + std::to_string(max_order));

    FiniteGroup g;
    g._order = n;
    g._label = std::move(label);
    g._table.resize(n * n);
    for (size_t a = 0 ; a < n ; ++a) {
        if (table[a].size() != n)
            throw Error(ErrorCode::NotAGroup, "table is not square (row " + std::to_string(a) + ")");
        for (size_t b = 0 ; b < n ; ++b) {
            auto v = table[a][b];
            if (v < 0 || static_cast<size_t>(v) >= n)
                throw Error(ErrorCode::NotAGroup, "entry out of range at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            g._table[a * n + b] = static_cast<Element>(v);
        }
    }

    std::optional<Element> identity;
    for (Element e = 0 ; e < n && ! identity ; ++e) {
        bool ok = true;
        for (Element x = 0 ; x < n && ok ; ++x)
            ok = g.op(e, x) == x && g.op(x, e) == x;
        if (ok)
            identity = e;
    }
    if (! identity)
        throw Error(ErrorCode::NotAGroup, "no identity element");
    g._identity = *identity;

    g._inverse.assign(n, 0);
    for (Element x = 0 ; x < n ; ++x) {
        std::optional<Element> inv;
        for (Element y = 0 ; y < n && ! inv ; ++y)
            if (g.op(x, y) == g._identity && g.op(y, x) == g._identity)
                inv = y;
        if (! inv)
            throw Error(ErrorCode::NotAGroup, "no inverse for element " + std::to_string(x));
        g._inverse[x] = *inv;
    }

    for (Element x = 0 ; x < n ; ++x)
        for (Element y = 0 ; y < n ; ++y) {
            auto xy = g.op(x, y);
            for (Element z = 0 ; z < n ; ++z)
                if (g.op(xy, z) != g.op(x, g.op(y, z)))
                    throw Error(ErrorCode::NotAGroup, "associativity fails at (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")");
        }

    return g;
}

auto FiniteGroup::table() const -> vector<vector<long long>>
{
    vector<vector<long long>> result(_order, vector<long long>(_order));
    for (size_t a = 0 ; a < _order ; ++a)
        for (size_t b = 0 ; b < _order ; ++b)
            result[a][b] = _table[a * _order + b];
    return result;
}

auto FiniteGroup::is_commutative() const -> bool
{
    for (Element a = 0 ; a < _order ; ++a)
        for (Element b = a + 1 ; b < _order ; ++b)
            if (op(a, b) != op(b, a))
                return false;
    return true;
}

auto cosetcsp::is_commutative(const FiniteGroup & g) -> bool
{
    return g.is_commutative();
}

auto cosetcsp::cyclic_group(size_t n) -> FiniteGroup
{
    vector<vector<long long>> t(n, vector<long long>(n));
    for (size_t a = 0 ; a < n ; ++a)
        for (size_t b = 0 ; b < n ; ++b)
            t[a][b] = static_cast<long long>((a + b) % n);
    return FiniteGroup::from_table(t, "Z" + std::to_string(n));
}

auto cosetcsp::klein_four_group() -> FiniteGroup
{
    vector<vector<long long>> t(4, vector<long long>(4));
    for (long long a = 0 ; a < 4 ; ++a)
        for (long long b = 0 ; b < 4 ; ++b)
            t[a][b] = a ^ b;
    return FiniteGroup::from_table(t, "V4");
}

auto cosetcsp::symmetric_group_3() -> FiniteGroup
{
    // permutations of {0,1,2} in lexicographic order; a then b means x -> b(a(x))
    vector<std::array<int, 3>> perms;
    std::array<int, 3> p{ 0, 1, 2 };
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    vector<vector<long long>> t(6, vector<long long>(6));
    for (size_t a = 0 ; a < 6 ; ++a)
        for (size_t b = 0 ; b < 6 ; ++b) {
            std::array<int, 3> c{};
            for (int x = 0 ; x < 3 ; ++x)
                c[x] = perms[b][perms[a][x]];
            t[a][b] = std::find(perms.begin(), perms.end(), c) - perms.begin();
        }
    return FiniteGroup::from_table(t, "S3");
}

auto cosetcsp::preset_group(const string & name) -> FiniteGroup
{
    if (name == "klein4")
        return klein_four_group();
    if (name == "symmetric:3")
        return symmetric_group_3();
    const string cyclic = "cyclic:";
    if (name.rfind(cyclic, 0) == 0) {
        size_t n = 0;
        try {
            n = std::stoul(name.substr(cyclic.size()));
        }
        catch (const std::exception &) {
            throw Error(ErrorCode::ParseError, "bad group preset '" + name + "'");
        }
        if (n == 0 || n > default_max_group_order)
            throw Error(ErrorCode::ParseError, "bad cyclic order in '" + name + "'");
        return cyclic_group(n);
    }
    throw Error(ErrorCode::ParseError, "unknown group preset '" + name + "'");
}

ProductGroup::ProductGroup(vector<GroupPtr> factors) :
    _factors(std::move(factors))
{
}

auto ProductGroup::order() const -> std::uint64_t
{
    std::uint64_t result = 1;
    for (auto & f : _factors) {
        if (result > std::numeric_limits<std::uint64_t>::max() / f->order())
            return std::numeric_limits<std::uint64_t>::max();
        result *= f->order();
    }
    return result;
}

auto ProductGroup::identity() const -> Tuple
{
    Tuple t(_factors.size());
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        t[i] = _factors[i]->identity();
    return t;
}

auto ProductGroup::op(const Tuple & a, const Tuple & b) const -> Tuple
{
    Tuple t(_factors.size());
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        t[i] = _factors[i]->op(a[i], b[i]);
    return t;
}

auto ProductGroup::inverse(const Tuple & a) const -> Tuple
{
    Tuple t(_factors.size());
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        t[i] = _factors[i]->inverse(a[i]);
    return t;
}

auto ProductGroup::contains(const Tuple & a) const -> bool
{
    if (a.size() != _factors.size())
        return false;
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        if (a[i] >= _factors[i]->order())
            return false;
    return true;
}

auto ProductGroup::encode(const Tuple & a) const -> std::uint64_t
{
    std::uint64_t index = 0;
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        index = index * _factors[i]->order() + a[i];
    return index;
}

auto ProductGroup::decode(std::uint64_t index) const -> Tuple
{
    Tuple t(_factors.size());
    for (size_t i = _factors.size() ; i-- > 0 ; ) {
        t[i] = static_cast<Element>(index % _factors[i]->order());
        index /= _factors[i]->order();
    }
    return t;
}

auto ProductGroup::elements() const -> vector<Tuple>
{
    vector<Tuple> result;
    Tuple t(_factors.size(), 0);
    do {
        result.push_back(t);
    } while (next_tuple(*this, t));
    return result;
}

auto ProductGroup::operator== (const ProductGroup & other) const -> bool
{
    if (_factors.size() != other._factors.size())
        return false;
    for (size_t i = 0 ; i < _factors.size() ; ++i)
        if (_factors[i] != other._factors[i] && *_factors[i] != *other._factors[i])
            return false;
    return true;
}

auto cosetcsp::product(vector<GroupPtr> factors) -> ProductGroup
{
    return ProductGroup{ std::move(factors) };
}

auto cosetcsp::next_tuple(const ProductGroup & g, Tuple & t) -> bool
{
    for (size_t i = g.arity() ; i-- > 0 ; ) {
        if (t[i] + 1 < g.factor(i).order()) {
            ++t[i];
            return true;
        }
        t[i] = 0;
    }
    return false;
}
