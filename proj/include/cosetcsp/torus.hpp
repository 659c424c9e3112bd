#pragma once

#include <cosetcsp/anomaly.hpp>
#include <cosetcsp/instance.hpp>

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cosetcsp
{
    enum class SlotKind
    {
        R,   // R_ij(a_ij, b_ij, c_ij)
        Rp   // R'_ij(a_i(j+1), b_(i+1)j, c_ij)
    };

    auto to_string(SlotKind kind) -> const char *;

    struct Slot
    {
        SlotKind kind = SlotKind::R;
        std::size_t i = 0, j = 0;

        auto operator<=> (const Slot &) const = default;
    };

    /**
     * An n-torus over an almost-direct product R. Each slot holds the coset
     * R pi for the stored pi (absent means pi = identity, the slot holds R).
     */
    struct TorusSpec
    {
        std::size_t n = 2;
        AlmostDirectProduct adp;
        std::map<Slot, Tuple> shifts;

        auto slot_count() const -> std::size_t { return 2 * n * n; }
        /// Slot of a position index; positions are numbered in (kind, i, j) order.
        auto slot(std::size_t position) const -> Slot;
        auto position(const Slot & s) const -> std::size_t;
        auto shift(const Slot & s) const -> Tuple;
        auto relation_at(const Slot & s) const -> CosetSet;
        /// Elements of the constraint at a slot, as indices of the built instance.
        auto elements_at(const Slot & s) const -> std::array<std::size_t, 3>;
    };

    /// All-R spec. Throws InvalidSpec for n < 2.
    auto make_torus_spec(std::size_t n, const AlmostDirectProduct & adp) -> TorusSpec;

    /// Checks n >= 2, slot indices in range and every shift in S1 x S2 x S3.
    /// Throws InvalidSpec.
    auto validate_torus_spec(const TorusSpec & spec) -> void;

    /// 3n^2 elements (a-block, b-block, c-block, each row-major) and 2n^2
    /// constraints in slot order. Slot relations are interned into t.
    /// Throws InvalidSpec.
    auto build_torus(const TorusSpec & spec, CosetTemplate & t) -> Instance;

    struct NeighborhoodGraph
    {
        std::size_t n = 0;
        std::vector<std::array<std::size_t, 3>> adjacency;  // by position index
        std::vector<char> negative;

        auto size() const -> std::size_t { return adjacency.size(); }
    };

    /// Negative positions are the R-slots, unless `swapped`.
    auto neighborhood_graph(std::size_t n, bool swapped = false) -> NeighborhoodGraph;

    /// The three positions sharing an element with the given one, in the order
    /// of the shared element (a, b, c).
    auto neighbors(const TorusSpec & spec, const Slot & s) -> std::array<Slot, 3>;

    /// Size of the largest connected component once `removed` positions are deleted.
    /// Throws PreconditionViolated unless |removed| < n.
    auto check_small_triangulation(std::size_t n, const std::vector<std::size_t> & removed) -> std::size_t;

    /// The spec with the slot's coset R pi0 replaced by R pi0 pi.
    auto twist(const TorusSpec & spec, const Slot & s, const Tuple & pi) -> TorusSpec;

    enum class TwistVerdict
    {
        Unsolvable,
        NotApplicable
    };

    auto to_string(TwistVerdict verdict) -> const char *;

    struct TwistCertificate
    {
        TwistVerdict verdict = TwistVerdict::NotApplicable;
        std::optional<Slot> twisted;
        /// The twist sits on an R'-slot, so the classes are swapped to make it negative.
        bool swapped = false;
    };

    /// Unsolvable iff R is an almost-direct product and exactly one slot holds a coset other than R.
    auto single_twist_unsolvable(const TorusSpec & spec) -> TwistCertificate;

    /**
     * The product of (h(a), h(b), h(c))^-1 over negative positions other than the
     * omitted one and of (h(a), h(b), h(c)) over positive positions, evaluated in
     * slot order or in the given permutation of positions. The omitted position
     * is negative. Throws PreconditionViolated unless h satisfies every other slot.
     */
    auto telescoping_product(const TorusSpec & spec, const Assignment & h, const Slot & omitted,
            const std::vector<std::size_t> & order = {}) -> Tuple;

    struct TelescopingCheck
    {
        Tuple product;
        Tuple product_image;
        Tuple omitted_image;
        bool product_in_r = false;
        bool omitted_in_r = false;

        auto holds() const -> bool { return product_in_r && product_image == omitted_image && omitted_in_r; }
    };

    /// Quotient images (by the component kernels of R) of the product and of the omitted triple.
    auto check_telescoping(const TorusSpec & spec, const Assignment & h, const Slot & omitted,
            const std::vector<std::size_t> & order = {}) -> TelescopingCheck;

    /// Members of the coset of the form (t1,1,1), (1,t2,1), (1,1,t3).
    /// Throws AssertionFailure if one is missing.
    auto lemma_1coord_witnesses(const AlmostDirectProduct & adp, const CosetSet & coset) -> std::array<Tuple, 3>;

    struct ExperimentRow
    {
        std::size_t n = 0;
        std::string variant;      // "all_R" or "twist"
        std::string solver;       // "solvable", "unsolvable", "budget_exceeded"
        std::string consistency;  // "accept", "reject"
        std::string certificate;  // "Unsolvable", "NotApplicable"
        double seconds = 0.0;
    };

    struct ExperimentOptions
    {
        std::size_t k = 2, l = 3;
        std::size_t n_min = 2, n_max = 6;
        SolveOptions solve;
        std::size_t jobs = 1;
        bool timing = true;
    };

    struct ExperimentReport
    {
        std::vector<ExperimentRow> rows;
        /// Twist slot R_00 and the lexicographically least pi in S1 x S2 x S3 outside R.
        Tuple twist_pi;
        /// Least n where consistency accepts the twisted torus that the certificate refutes.
        std::optional<std::size_t> minimal_fooling_n;
    };

    /// Throws PreconditionViolated if R is not an almost-direct product.
    auto fooling_experiment(const CosetTemplate & t, const AlmostDirectProduct & adp, const ExperimentOptions & options = {})
        -> ExperimentReport;
}
