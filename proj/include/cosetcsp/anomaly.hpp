#pragma once

#include <cosetcsp/adp.hpp>
#include <cosetcsp/instance.hpp>
#include <cosetcsp/solver.hpp>

#include <array>
#include <optional>
#include <vector>

namespace cosetcsp
{
    /// A (k, j)-anomaly: a size-j partial solution that does not extend to a
    /// solution although each of its restrictions to k elements does.
    struct AnomalyWitness
    {
        Instance instance;
        Assignment h;
        std::size_t k = 0;
        std::size_t j = 0;
    };

    auto is_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h, std::size_t k,
            const SolveOptions & options = {}) -> bool;

    /// First witness with domain size j, domains in lexicographic order of element
    /// indices and values in lexicographic order within a domain.
    auto find_kj_anomaly(const Instance & i, const CosetTemplate & t, std::size_t k, std::size_t j,
            const SolveOptions & options = {}) -> std::optional<AnomalyWitness>;

    /// Restricts a (2, j)-anomaly to a minimal non-extending subset X, giving a
    /// (|X|-1, |X|)-anomaly. Subsets are tried by size, then lexicographically.
    /// Throws NotAnAnomaly.
    auto shrink_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h,
            const SolveOptions & options = {}) -> AnomalyWitness;

    struct ShiftedInstance
    {
        Instance instance;
        /// The pre-solution the input was acted on by (inverse of the first solution).
        Assignment shift;
    };

    /// I h^-1 for the solver's first solution h; every constraint becomes a subgroup.
    /// Throws Unsolvable.
    auto normalize_subgroup_instance(const Instance & i, CosetTemplate & t, const SolveOptions & options = {}) -> ShiftedInstance;

    /// One step from a (k, k+1)-anomaly of a subgroup instance to a (k-1, k)-anomaly
    /// of the instance with an extra identity constraint on the first element of dom(h).
    /// Throws PreconditionViolated.
    auto reduce_anomaly_step(const Instance & i, CosetTemplate & t, const Assignment & h, std::size_t k,
            const SolveOptions & options = {}) -> AnomalyWitness;

    /// Assignments on X (in element order) that extend to a solution. Throws EmptyH.
    auto extendable_group(const Instance & i, const CosetTemplate & t, const std::vector<std::size_t> & X,
            const SolveOptions & options = {}) -> CosetSet;

    /// An almost-direct product R <= S1 x S2 x S3, each S_i a subgroup of a carrier.
    /// R is stored over the carrier groups G1 x G2 x G3.
    struct AlmostDirectProduct
    {
        std::array<std::string, 3> carriers;
        std::array<CosetSet, 3> factors;
        CosetSet relation;

        auto carrier_product() const -> const ProductGroup & { return relation.ambient(); }
        /// pi in S1 x S2 x S3.
        auto in_factors(const Tuple & pi) const -> bool;
        /// R re-expressed over the S_i as standalone groups.
        auto local() const -> std::pair<std::array<EmbeddedSubgroup, 3>, CosetSet>;
        auto kind() const -> AdpKind;
        /// Every coset of R inside S1 x S2 x S3, R first.
        auto cosets() const -> std::vector<CosetSet>;
    };

    /// Builds an AlmostDirectProduct from a subgroup R of a carrier product, taking
    /// S_i to be the coordinate projections of R.
    auto adp_from_relation(const std::array<std::string, 3> & carriers, const CosetSet & relation) -> AlmostDirectProduct;

    struct AdpExtraction
    {
        AlmostDirectProduct adp;
        CosetSet extendable;  // H
        AdpKind kind = AdpKind::NotADP;
        std::array<PPFormula, 3> factor_witnesses;
        PPFormula relation_witness;
        PPFormula extendable_witness;
    };

    /// The construction from a (2,3)-anomaly of a subgroup instance: H, then the
    /// S_i by the two-sided existential conditions, then R = H restricted to
    /// S1 x S2 x S3. Throws AssertionFailure if R were not an almost-direct product.
    auto build_adp_from_anomaly(const Instance & i, const CosetTemplate & t, const Assignment & h,
            const SolveOptions & options = {}) -> AdpExtraction;

    struct PipelineOptions
    {
        SolveOptions solve;
        /// Random instances tried when no witness instance is supplied.
        std::uint64_t search_budget = 2000;
        std::uint64_t seed = 1;
    };

    struct PipelineResult
    {
        AdpExtraction extraction;
        /// Found anomaly, then after normalisation, shrinking and every reduction.
        std::vector<AnomalyWitness> chain;
        std::size_t reductions = 0;
    };

    /// Finds (or takes) a (2, j)-anomaly, normalises to a subgroup instance, shrinks,
    /// reduces to a (2,3)-anomaly and extracts the almost-direct product. Returns
    /// nullopt when no anomaly is found.
    auto helly_pipeline(CosetTemplate & t, const std::optional<Instance> & witness,
            const std::optional<Assignment> & anomaly, const PipelineOptions & options = {}) -> std::optional<PipelineResult>;
}
