#pragma once

#include <cosetcsp/instance.hpp>

#include <cstdint>
#include <functional>
#include <optional>

namespace cosetcsp
{
    inline constexpr std::uint64_t default_node_budget = 1'000'000;

    struct SolveOptions
    {
        /// Cap on admissible partial assignments visited, per call.
        std::uint64_t node_budget = default_node_budget;
    };

    /**
     * Complete depth-first backtracking over the instance's element order, values
     * in index order, pruning any value that leaves some incident constraint
     * without a supporting tuple. The first solution returned is therefore the
     * lexicographically least one. Throws BudgetExceeded.
     *
     * Instances carrying pp-constraints are expanded first and the answer is
     * restricted back to the original elements.
     */
    auto solve(const Instance & i, const CosetTemplate & t, const SolveOptions & options = {}) -> std::optional<Assignment>;

    /// Least solution agreeing with h on dom(h).
    auto solve_extending(const Instance & i, const CosetTemplate & t, const Assignment & h,
            const SolveOptions & options = {}) -> std::optional<Assignment>;

    auto extends_to_solution(const Instance & i, const CosetTemplate & t, const Assignment & h,
            const SolveOptions & options = {}) -> bool;

    struct SolutionSet
    {
        std::vector<Assignment> solutions;
        /// The tuple view passed the coset test (vacuously true when empty).
        bool coset_certified = true;
        CosetKind kind = CosetKind::NotCoset;
    };

    /// Every solution, in lexicographic order. Throws CapExceeded beyond `cap`.
    auto all_solutions(const Instance & i, const CosetTemplate & t, std::size_t cap,
            const SolveOptions & options = {}) -> SolutionSet;

    /// Calls f on every solution in lexicographic order until it returns false.
    auto for_each_solution(const Instance & i, const CosetTemplate & t, const std::function<bool (const Assignment &)> & f,
            const SolveOptions & options = {}) -> void;

    /// Distinct restrictions of solutions to `vars`, as tuples in the order of
    /// `vars`, sorted lexicographically.
    auto project_solutions(const Instance & i, const CosetTemplate & t, const std::vector<std::size_t> & vars,
            const SolveOptions & options = {}) -> std::vector<Tuple>;
}
