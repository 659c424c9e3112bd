#include <cosetcsp/error.hpp>
#include <cosetcsp/template.hpp>

#include <algorithm>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::vector;

auto cosetcsp::identity_relation_name(const string & carrier) -> string
{
    return "1@" + carrier;
}

auto CosetTemplate::add_carrier(const string & name, GroupPtr group) -> void
{
    if (has_carrier(name))
        throw Error(ErrorCode::InvalidSpec, "duplicate carrier '" + name + "'");
    _carriers.emplace_back(name, std::move(group));
}

auto CosetTemplate::has_carrier(const string & name) const -> bool
{
    return std::any_of(_carriers.begin(), _carriers.end(), [&] (auto & c) { return c.first == name; });
}

auto CosetTemplate::carrier(const string & name) const -> const GroupPtr &
{
    for (auto & [n, g] : _carriers)
        if (n == name)
            return g;
    throw Error(ErrorCode::UnknownCarrier, name);
}

auto CosetTemplate::ambient_of(const vector<string> & signature) const -> ProductGroup
{
    vector<GroupPtr> factors;
    for (auto & s : signature)
        factors.push_back(carrier(s));
    return ProductGroup{ std::move(factors) };
}

auto CosetTemplate::add_relation(const string & name, const vector<string> & signature, vector<Tuple> tuples) -> void
{
    if (has_relation(name))
        throw Error(ErrorCode::InvalidSpec, "duplicate relation '" + name + "'");
    auto ambient = ambient_of(signature);
    for (auto & t : tuples)
        if (! ambient.contains(t))
            throw Error(ErrorCode::ArityMismatch, "tuple of relation '" + name + "' does not fit its signature");
    _relations.emplace(name, Relation{ name, signature, classify_subset(ambient, std::move(tuples)), name });
}

auto CosetTemplate::remove_relation(const string & name) -> void
{
    _relations.erase(name);
}

auto CosetTemplate::has_relation(const string & name) const -> bool
{
    return _relations.contains(name);
}

auto CosetTemplate::relation(const string & name) const -> const Relation &
{
    auto it = _relations.find(name);
    if (it == _relations.end())
        throw Error(ErrorCode::UnknownRelation, name);
    return it->second;
}

auto CosetTemplate::intern(const vector<string> & signature, const CosetSet & set, const string & origin) -> string
{
    if (! set.is_coset())
        throw Error(ErrorCode::NotCosetInput, "only cosets can be template relations");
    for (auto & [name, r] : _relations)
        if (r.signature == signature && r.set == set)
            return name;

    string name = origin + "*(";
    for (size_t i = 0 ; i < set.representative().size() ; ++i)
        name += (i ? "," : "") + std::to_string(set.representative()[i]);
    name += ")";
    while (_relations.contains(name))
        name += "'";
    _relations.emplace(name, Relation{ name, signature, set, origin });
    return name;
}

auto CosetTemplate::intern_translate(const string & name, const Tuple & pi) -> string
{
    auto r = relation(name);
    if (pi == r.set.ambient().identity())
        return name;
    return intern(r.signature, translate(r.set, pi), r.origin);
}

auto cosetcsp::validate_template(const CosetTemplate & t) -> ValidationReport
{
    ValidationReport report;
    auto fail = [&] (string why) {
        report.valid = false;
        report.violations.push_back(std::move(why));
    };

    for (auto & [name, r] : t.relations()) {
        if (! r.set.is_coset())
            fail("relation '" + name + "' is not a coset (NotCoset)");
        bool signature_ok = r.signature.size() == r.set.ambient().arity();
        for (size_t i = 0 ; signature_ok && i < r.signature.size() ; ++i)
            signature_ok = t.has_carrier(r.signature[i]) && *t.carrier(r.signature[i]) == r.set.ambient().factor(i);
        if (! signature_ok)
            fail("relation '" + name + "' does not match its signature carriers");
    }

    for (auto & [cname, g] : t.carriers()) {
        auto id_name = identity_relation_name(cname);
        if (! t.has_relation(id_name)) {
            fail("missing identity singleton '" + id_name + "'");
            continue;
        }
        auto & r = t.relation(id_name);
        if (r.signature != vector<string>{ cname } || r.set.size() != 1 || r.set.representative() != Tuple{ g->identity() })
            fail("relation '" + id_name + "' is not the identity singleton of " + cname);
    }
    return report;
}
