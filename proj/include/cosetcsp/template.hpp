#pragma once

#include <cosetcsp/coset.hpp>

#include <map>
#include <string>
#include <vector>

namespace cosetcsp
{
    struct Relation
    {
        std::string name;
        std::vector<std::string> signature;
        CosetSet set;
        /// Name of the stored base relation this one is a translate of (itself for base relations).
        std::string origin;

        auto arity() const -> std::size_t { return signature.size(); }
    };

    /**
     * A relational template whose carrier is a disjoint union of named groups.
     *
     * Only base relations are stored up front. Translates R pi are interned on
     * demand under a name derived from the coset's canonical representative, or
     * under the name of an already-stored relation with the same members. Interning
     * mutates the template, so callers that share a template across threads should
     * give each thread its own copy.
     */
    class CosetTemplate
    {
        private:
            std::vector<std::pair<std::string, GroupPtr>> _carriers;
            std::map<std::string, Relation> _relations;

        public:
            auto add_carrier(const std::string & name, GroupPtr group) -> void;
            auto add_relation(const std::string & name, const std::vector<std::string> & signature,
                    std::vector<Tuple> tuples) -> void;
            auto remove_relation(const std::string & name) -> void;

            auto has_carrier(const std::string & name) const -> bool;
            auto carrier(const std::string & name) const -> const GroupPtr &;
            auto carriers() const -> const std::vector<std::pair<std::string, GroupPtr>> & { return _carriers; }

            auto has_relation(const std::string & name) const -> bool;
            auto relation(const std::string & name) const -> const Relation &;
            auto relations() const -> const std::map<std::string, Relation> & { return _relations; }

            auto ambient_of(const std::vector<std::string> & signature) const -> ProductGroup;

            /// Name under which the coset (over the given signature) is known, adding it if needed.
            auto intern(const std::vector<std::string> & signature, const CosetSet & set,
                    const std::string & origin) -> std::string;

            /// Name of the translate of relation `name` by pi.
            auto intern_translate(const std::string & name, const Tuple & pi) -> std::string;
    };

    auto identity_relation_name(const std::string & carrier) -> std::string;

    struct ValidationReport
    {
        bool valid = true;
        std::vector<std::string> violations;
    };

    /// Checks coset-hood of every relation, signature/ambient agreement, and the
    /// presence of the identity singleton "1@G" for every carrier G.
    auto validate_template(const CosetTemplate & t) -> ValidationReport;
}
