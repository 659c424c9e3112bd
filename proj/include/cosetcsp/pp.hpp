#pragma once

#include <cosetcsp/instance.hpp>
#include <cosetcsp/solver.hpp>

#include <string>
#include <vector>

namespace cosetcsp
{
    /// Checks variable ranges, arities, and that every free variable occurs in an atom.
    auto validate_formula(const PPFormula & f, const CosetTemplate & t) -> void;

    /// The gadget instance of a formula: one element per variable ("v0", "v1", ...),
    /// one constraint per atom.
    auto formula_instance(const PPFormula & f) -> Instance;

    /// The relation defined by the formula, over the product of its free variables'
    /// carriers. Throws EmptyRelation when unsatisfiable.
    auto materialize_pp(const CosetTemplate & t, const PPFormula & f, const SolveOptions & options = {}) -> CosetSet;

    /// Reads an instance as a formula whose free variables are `free` (in that
    /// order) and whose bound variables are the remaining elements in order.
    auto formula_from_instance(const Instance & i, const std::vector<std::size_t> & free) -> PPFormula;

    /// Incrementally builds a formula out of copies of other formulas.
    class FormulaBuilder
    {
        private:
            PPFormula _formula;

        public:
            explicit FormulaBuilder(std::size_t free_count);

            auto fresh() -> std::size_t;
            auto atom(const std::string & relation, std::vector<std::size_t> vars) -> void;
            /// Conjoins a copy of f with its free variables bound to `args`; its bound
            /// variables become fresh bound variables here.
            auto conjoin(const PPFormula & f, const std::vector<std::size_t> & args) -> void;

            auto build() const -> PPFormula;
    };

    /// Translates every atom by the values of a pre-solution of the formula's gadget
    /// instance, interning translates into t. With s identity on bound variables
    /// the result defines (relation of f) pi, pi = s on the free variables.
    auto translate_formula(const PPFormula & f, const Assignment & s, CosetTemplate & t) -> PPFormula;

    /// Formula defining the translate by pi of the relation f defines.
    auto translate_formula(const PPFormula & f, const Tuple & pi, CosetTemplate & t) -> PPFormula;

    /// Replaces every pp-constraint by its atoms over fresh elements for the bound variables.
    auto expand_pp_gadget(const Instance & i, const CosetTemplate & t) -> Instance;
}
