#pragma once

#include <cosetcsp/instance.hpp>

#include <cstdint>
#include <vector>

namespace cosetcsp::innards
{
    inline constexpr std::uint64_t max_bitmap_order = std::uint64_t{ 1 } << 24;

    /// A constraint with its relation lowered to a membership bitmap.
    struct CompiledConstraint
    {
        std::vector<std::size_t> args;
        CosetSet set;
        std::vector<std::uint64_t> strides;
        std::vector<char> member;

        /// `values` is indexed by element; all args must be assigned.
        auto holds(const std::vector<long> & values) const -> bool;

        /// Some member agrees with every assigned argument.
        auto supported(const std::vector<long> & values) const -> bool;
    };

    class CompiledInstance
    {
        public:
            std::vector<GroupPtr> groups;
            std::vector<CompiledConstraint> constraints;
            std::vector<std::vector<std::size_t>> incident;

            CompiledInstance(const Instance & i, const CosetTemplate & t);

            auto size() const -> std::size_t { return groups.size(); }
    };
}
