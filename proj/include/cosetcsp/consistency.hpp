#pragma once

#include <cosetcsp/instance.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace cosetcsp
{
    /// H_X: partial solutions with domain exactly X, as a bitmap over the product
    /// of the constraining groups of X (first element most significant).
    struct Family
    {
        std::vector<std::size_t> elements;
        std::vector<std::size_t> radices;
        std::vector<char> member;
        std::size_t count = 0;

        auto encode(const Tuple & values) const -> std::size_t;
        auto decode(std::size_t index) const -> Tuple;
        auto contains(const Tuple & values) const -> bool { return member[encode(values)]; }
        /// Members in lexicographic order.
        auto members() const -> std::vector<Tuple>;
    };

    /**
     * One family for every nonempty subset X of at most k elements. Families are
     * stored by size, then by colexicographic rank of X.
     */
    class ConsistencyFamilies
    {
        private:
            std::size_t _element_count = 0, _k = 0;
            std::vector<std::size_t> _size_offset;
            std::vector<std::vector<std::uint64_t>> _binomial;
            std::vector<Family> _families;

        public:
            ConsistencyFamilies(std::size_t element_count, std::size_t k);

            auto k() const -> std::size_t { return _k; }
            auto element_count() const -> std::size_t { return _element_count; }
            auto families() const -> const std::vector<Family> & { return _families; }
            auto families() -> std::vector<Family> & { return _families; }

            /// Storage index of a sorted subset.
            auto index_of(const std::vector<std::size_t> & x) const -> std::size_t;
            auto family(const std::vector<std::size_t> & x) const -> const Family & { return _families[index_of(x)]; }

            auto total_size() const -> std::size_t;
            auto all_nonempty() const -> bool;
            auto any_nonempty() const -> bool { return total_size() != 0; }

            auto operator== (const ConsistencyFamilies &) const -> bool;
    };

    /// H_X = all partial solutions on X, for every |X| <= k. Expects a normalized
    /// instance without pp-constraints. Throws CapExceeded for oversized families.
    auto init_families(const Instance & i, const CosetTemplate & t, std::size_t k) -> ConsistencyFamilies;

    /**
     * Pairs (X, Y) with |Y| = min(l, n) and X a nonempty subset of Y with at most
     * k elements, ordered lexicographically by (Y, X) as sorted index lists.
     * Depends on nothing but n, k and l.
     */
    class Schedule
    {
        private:
            std::size_t _element_count, _k, _l;
            std::vector<std::vector<std::size_t>> _positions;

        public:
            Schedule(std::size_t element_count, std::size_t k, std::size_t l);

            auto window_size() const -> std::size_t;
            /// Subsets of a window as position lists, in the order they are visited.
            auto window_subsets() const -> const std::vector<std::vector<std::size_t>> & { return _positions; }
            auto size() const -> std::uint64_t;

            /// Calls f(Y, subsets-of-Y) for every window in order, until f returns false.
            auto for_each_window(const std::function<bool (const std::vector<std::size_t> &,
                        const std::vector<std::vector<std::size_t>> &)> & f) const -> bool;

            /// Every pair, in order (only sensible for small instances).
            auto pairs() const -> std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>;
    };

    auto build_schedule(std::size_t element_count, std::size_t k, std::size_t l) -> Schedule;

    /// Filters H_X to members extending to a partial solution on Y whose every
    /// restriction of size at most k is in the current families. Returns the
    /// number of removed members.
    auto refine_step(ConsistencyFamilies & f, const std::vector<std::size_t> & x, const std::vector<std::size_t> & y,
            const Instance & i, const CosetTemplate & t) -> std::size_t;

    struct TraceEntry
    {
        std::uint64_t stage = 0;  // 1-based, counted across passes
        std::size_t pass = 0;     // 1-based
        std::size_t family = 0;   // storage index
        std::size_t before = 0;
        Family after;
    };

    struct ConsistencyOptions
    {
        /// Keep the families after every stage that changed something.
        bool record_trace = false;
    };

    struct ConsistencyResult
    {
        bool accept = false;
        /// Every H_X nonempty at the end; must agree with accept.
        bool all_nonempty = false;
        ConsistencyFamilies families;
        std::optional<ConsistencyFamilies> initial;
        std::vector<TraceEntry> trace;
        std::vector<std::size_t> removed_per_pass;
        std::size_t passes = 0;
        std::uint64_t stages = 0;
        /// Stage at which every family had become empty, if that happened.
        std::optional<std::uint64_t> emptied_at;
    };

    /// Full passes of the schedule until one removes nothing, or until every
    /// family is empty. Throws PreconditionViolated if k > l or k == 0.
    auto run_kl_consistency(const Instance & i, const CosetTemplate & t, std::size_t k, std::size_t l,
            const ConsistencyOptions & options = {}) -> ConsistencyResult;

    /// Direct image {h s : h in H_X}.
    auto act_family(const Family & f, const Instance & i, const CosetTemplate & t, const Assignment & s) -> Family;

    /// Runs on i and on i s and compares the initial families, every recorded
    /// stage and the verdict under the direct-image action.
    auto check_equivariance(const Instance & i, CosetTemplate & t, const Assignment & s, std::size_t k, std::size_t l) -> bool;

    /// H_X s = H_X for every family whose X is fixed by s (s is the identity on X).
    auto check_locality(const ConsistencyFamilies & f, const Instance & i, const CosetTemplate & t, const Assignment & s) -> bool;
}
