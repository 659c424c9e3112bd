#pragma once

#include <cosetcsp/template.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cosetcsp
{
    /// A primitive-positive formula: free variables 0..free_count-1, bound
    /// variables free_count..free_count+bound_count-1, and a conjunction of atoms.
    struct PPAtom
    {
        std::string relation;
        std::vector<std::size_t> vars;

        auto operator== (const PPAtom &) const -> bool = default;
    };

    struct PPFormula
    {
        std::size_t free_count = 0;
        std::size_t bound_count = 0;
        std::vector<PPAtom> atoms;

        auto variable_count() const -> std::size_t { return free_count + bound_count; }
        auto operator== (const PPFormula &) const -> bool = default;
    };

    struct Constraint
    {
        std::string relation;
        std::vector<std::size_t> args;

        auto operator== (const Constraint &) const -> bool = default;
    };

    /// A constraint given by a pp-formula applied to elements (one per free variable).
    struct PPConstraint
    {
        PPFormula formula;
        std::vector<std::size_t> args;

        auto operator== (const PPConstraint &) const -> bool = default;
    };

    /**
     * Elements are opaque ids; their stored order is the total order used for
     * tuple views, search and schedules. Constraint arguments are indices into
     * the element list.
     */
    struct Instance
    {
        std::vector<std::string> elements;
        std::vector<Constraint> constraints;
        std::vector<PPConstraint> pp_constraints;

        auto size() const -> std::size_t { return elements.size(); }
        auto index_of(const std::string & id) const -> std::size_t;
        auto add_element(const std::string & id) -> std::size_t;
        auto add_constraint(const std::string & relation, const std::vector<std::string> & ids) -> void;

        auto operator== (const Instance &) const -> bool = default;
    };

    /// A partial map from element indices to group elements.
    class Assignment
    {
        private:
            std::vector<std::optional<Element>> _values;

        public:
            Assignment() = default;
            explicit Assignment(std::size_t element_count);

            static auto total(const std::vector<Element> & values) -> Assignment;

            auto element_count() const -> std::size_t { return _values.size(); }
            auto has(std::size_t e) const -> bool { return _values[e].has_value(); }
            auto at(std::size_t e) const -> Element { return *_values[e]; }
            auto get(std::size_t e) const -> const std::optional<Element> & { return _values[e]; }
            auto set(std::size_t e, Element v) -> void { _values[e] = v; }
            auto unset(std::size_t e) -> void { _values[e].reset(); }

            auto domain() const -> std::vector<std::size_t>;
            auto domain_size() const -> std::size_t;
            auto is_total() const -> bool;
            auto restrict_to(const std::vector<std::size_t> & subset) const -> Assignment;
            /// Values on the given elements, in the given order.
            auto tuple(const std::vector<std::size_t> & elements) const -> Tuple;

            auto operator== (const Assignment &) const -> bool = default;
    };

    /// Carrier name of each element's constraining group ("" if unconstrained).
    /// Throws ContradictoryInstance, UnknownRelation, ArityMismatch.
    auto constraining_carriers(const Instance & i, const CosetTemplate & t) -> std::vector<std::string>;

    /// Same, resolved to groups; every element must be constrained.
    auto constraining_groups(const Instance & i, const CosetTemplate & t) -> std::vector<GroupPtr>;

    /// Drops unconstrained elements, reindexing constraints. Throws ContradictoryInstance.
    auto normalize_instance(const Instance & i, const CosetTemplate & t) -> Instance;

    /// Every constraint lying inside dom(h) holds.
    auto is_partial_solution(const Instance & i, const CosetTemplate & t, const Assignment & h) -> bool;

    /// Every value lies in the element's constraining group (domain may be partial).
    auto is_pre_assignment(const Instance & i, const CosetTemplate & t, const Assignment & h) -> bool;

    /// Product of constraining groups of the given elements, in the given order.
    auto tuple_group(const Instance & i, const CosetTemplate & t, const std::vector<std::size_t> & elements) -> ProductGroup;

    /// Pointwise h(a) s(a) on dom(h).
    auto act_assignment(const Instance & i, const CosetTemplate & t, const Assignment & h, const Assignment & s) -> Assignment;

    /// Pointwise inverse of a pre-solution.
    auto invert_assignment(const Instance & i, const CosetTemplate & t, const Assignment & s) -> Assignment;

    /// Identity pre-solution.
    auto identity_assignment(const Instance & i, const CosetTemplate & t) -> Assignment;

    /// Every constraint R(a_1..a_n) becomes (R pi)(a_1..a_n) with pi = (s(a_1)..s(a_n)).
    /// Translates are interned into t.
    auto act_instance(const Instance & i, const Assignment & s, CosetTemplate & t) -> Instance;

    auto is_subgroup_instance(const Instance & i, const CosetTemplate & t) -> bool;
}
