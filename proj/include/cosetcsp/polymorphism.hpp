#pragma once

#include <cosetcsp/template.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace cosetcsp
{
    /// A ternary operation on the disjoint union of carriers. Elements of the union
    /// are numbered carrier by carrier in the template's carrier order.
    struct TernaryOperation
    {
        std::vector<std::size_t> offsets; // first global id of each carrier
        std::size_t universe = 0;
        std::vector<std::size_t> table;   // indexed by (x * universe + y) * universe + z

        auto operator() (std::size_t x, std::size_t y, std::size_t z) const -> std::size_t
        {
            return table[(x * universe + y) * universe + z];
        }
    };

    struct PolymorphismOptions
    {
        std::uint64_t node_budget = 10'000'000;
        /// Also require preservation of every translate of every base relation.
        bool include_translates = true;
    };

    /// Backtracking search for m with m(x,x,y) = m(x,y,x) = m(y,x,x) = x preserving
    /// every relation. Throws BudgetExceeded.
    auto find_majority_polymorphism(const CosetTemplate & t, const PolymorphismOptions & options = {})
        -> std::optional<TernaryOperation>;

    /// Independent exhaustive check of the majority identities and preservation.
    auto is_majority_polymorphism(const CosetTemplate & t, const TernaryOperation & m, bool include_translates = true) -> bool;
}
