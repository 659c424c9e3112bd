#pragma once

#include <cosetcsp/coset.hpp>

#include <array>

namespace cosetcsp
{
    enum class AdpKind
    {
        NotADP,
        ADP,
        StrictADP
    };

    auto to_string(AdpKind kind) -> const char *;

    /// N_i = { x in G_i : the tuple with x at coordinate i and identities elsewhere lies in H }.
    /// Coordinates are 0-based. Throws NotSubgroup.
    auto component_kernel(const CosetSet & h, std::size_t i) -> CosetSet;

    /// Almost-direct-product test for a subgroup of a 3-factor product: H is proper,
    /// and any two coordinates can be completed to a member. Strict when the
    /// completion is always unique. Throws NotSubgroup.
    auto classify_almost_direct(const CosetSet & h) -> AdpKind;

    /// Projection of a group onto its quotient by a normal subgroup.
    struct QuotientMap
    {
        GroupPtr source;
        CosetSet kernel;
        GroupPtr target;
        std::vector<Element> projection;

        auto operator() (Element x) const -> Element { return projection[x]; }
    };

    /// Quotient by a normal subgroup (given over a one-factor product). Classes are
    /// numbered in order of their least element. Throws NotSubgroup if the kernel
    /// is not a normal subgroup.
    auto quotient(const GroupPtr & g, const CosetSet & normal_subgroup) -> QuotientMap;

    struct AdpQuotient
    {
        std::array<QuotientMap, 3> maps;
        ProductGroup target;
        CosetSet image;

        auto project(const Tuple & t) const -> Tuple;
    };

    /// Factors an almost-direct product by its component kernels. The image is
    /// verified to be a strict almost-direct product. Throws NotADPInput.
    auto quotient_adp(const CosetSet & h) -> AdpQuotient;

    /// Exhaustive commutativity of a subgroup.
    auto is_commutative(const CosetSet & subgroup) -> bool;

    /// Class id of x under the i-th equivalence of H; ids agree exactly on
    /// equivalent elements. The id is the least element of the kernel coset N_i x.
    auto equivalence_class(const CosetSet & h, std::size_t i, Element x) -> Element;
}
