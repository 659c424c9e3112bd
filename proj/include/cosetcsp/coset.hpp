#pragma once

#include <cosetcsp/group.hpp>

#include <span>
#include <vector>

namespace cosetcsp
{
    enum class CosetKind
    {
        NotCoset,
        Coset,
        Subgroup
    };

    auto to_string(CosetKind kind) -> const char *;

    /**
     * An explicit nonempty subset of a product group, stored as a sorted,
     * duplicate-free member list, together with its classification. The
     * canonical representative is the lexicographically least member. Cosets
     * are right cosets throughout.
     */
    class CosetSet
    {
        private:
            ProductGroup _ambient;
            std::vector<Tuple> _members;
            CosetKind _kind = CosetKind::NotCoset;

            CosetSet(ProductGroup ambient, std::vector<Tuple> sorted_members, CosetKind kind);

            friend auto classify_subset(const ProductGroup &, std::vector<Tuple>) -> CosetSet;

        public:
            auto ambient() const -> const ProductGroup & { return _ambient; }
            auto members() const -> const std::vector<Tuple> & { return _members; }
            auto kind() const noexcept -> CosetKind { return _kind; }
            auto size() const noexcept -> std::size_t { return _members.size(); }
            auto representative() const -> const Tuple & { return _members.front(); }

            auto is_coset() const noexcept -> bool { return _kind != CosetKind::NotCoset; }
            auto is_subgroup() const noexcept -> bool { return _kind == CosetKind::Subgroup; }
            auto contains(const Tuple & t) const -> bool;

            auto operator== (const CosetSet & other) const -> bool;
    };

    /// Sorts and deduplicates members, then classifies. Throws EmptySet.
    auto classify_subset(const ProductGroup & ambient, std::vector<Tuple> members) -> CosetSet;

    /// Smallest subgroup containing the generators; {identity} for none.
    auto generate_subgroup(const ProductGroup & ambient, const std::vector<Tuple> & generators) -> CosetSet;

    /// Right translate {x pi : x in c}. Throws NotCosetInput.
    auto translate(const CosetSet & c, const Tuple & pi) -> CosetSet;

    /// x y^-1 z in S for all x, y, z in S. Cubic; used as an independent check.
    auto is_malcev_closed(const ProductGroup & ambient, std::span<const Tuple> sorted_members) -> bool;

    /// Set intersection of two subsets of the same ambient group; empty when disjoint.
    auto intersect_members(const CosetSet & a, const CosetSet & b) -> std::vector<Tuple>;

    /// The subgroup on a single group, wrapped in a one-factor product.
    auto single_factor(const GroupPtr & g) -> ProductGroup;

    /// A subgroup re-presented as a standalone group, with the embedding into the parent.
    struct EmbeddedSubgroup
    {
        GroupPtr group;
        std::vector<Element> to_parent;
        std::vector<long> from_parent; // -1 when the parent element is outside the subgroup
    };

    /// Expects a subgroup of a one-factor product.
    auto embed_subgroup(const CosetSet & subgroup) -> EmbeddedSubgroup;
}
