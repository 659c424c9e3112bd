#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cosetcsp
{
    /// Index of a group element inside its Cayley table.
    using Element = std::uint32_t;

    /// A tuple of factor elements, i.e. an element of a ProductGroup.
    using Tuple = std::vector<Element>;

    inline constexpr std::size_t default_max_group_order = 512;

    /**
     * A finite group given by an explicit Cayley table.
     *
     * The operation is written in diagrammatic order, op(a, b) = "a then b".
     * Tables are validated exhaustively at construction (identity, inverses and
     * associativity), so every FiniteGroup value is a group.
     */
    class FiniteGroup
    {
        private:
            std::size_t _order = 0;
            std::vector<Element> _table;
            Element _identity = 0;
            std::vector<Element> _inverse;
            std::string _label;

            FiniteGroup() = default;

        public:
            static auto from_table(const std::vector<std::vector<long long>> & table, std::string label = "",
                    std::size_t max_order = default_max_group_order) -> FiniteGroup;

            auto order() const noexcept -> std::size_t { return _order; }
            auto identity() const noexcept -> Element { return _identity; }
            auto label() const noexcept -> const std::string & { return _label; }

            auto op(Element a, Element b) const -> Element { return _table[a * _order + b]; }
            auto inverse(Element a) const -> Element { return _inverse[a]; }

            auto table() const -> std::vector<std::vector<long long>>;
            auto is_commutative() const -> bool;

            auto operator== (const FiniteGroup &) const -> bool = default;
    };

    using GroupPtr = std::shared_ptr<const FiniteGroup>;

    auto cyclic_group(std::size_t n) -> FiniteGroup;
    auto klein_four_group() -> FiniteGroup;
    auto symmetric_group_3() -> FiniteGroup;

    /// Resolves "cyclic:n", "klein4" and "symmetric:3".
    auto preset_group(const std::string & name) -> FiniteGroup;

    auto is_commutative(const FiniteGroup & g) -> bool;

    /// Direct product with componentwise operation; elements are tuples.
    class ProductGroup
    {
        private:
            std::vector<GroupPtr> _factors;

        public:
            ProductGroup() = default;
            explicit ProductGroup(std::vector<GroupPtr> factors);

            auto arity() const noexcept -> std::size_t { return _factors.size(); }
            auto factor(std::size_t i) const -> const FiniteGroup & { return *_factors[i]; }
            auto factor_ptr(std::size_t i) const -> const GroupPtr & { return _factors[i]; }
            auto factors() const -> const std::vector<GroupPtr> & { return _factors; }

            /// Saturates at UINT64_MAX for absurdly large products.
            auto order() const -> std::uint64_t;

            auto identity() const -> Tuple;
            auto op(const Tuple & a, const Tuple & b) const -> Tuple;
            auto inverse(const Tuple & a) const -> Tuple;
            auto contains(const Tuple & a) const -> bool;

            /// Mixed-radix index, first factor most significant; requires order() to fit.
            auto encode(const Tuple & a) const -> std::uint64_t;
            auto decode(std::uint64_t index) const -> Tuple;

            /// All elements in lexicographic order.
            auto elements() const -> std::vector<Tuple>;

            auto operator== (const ProductGroup & other) const -> bool;
    };

    auto product(std::vector<GroupPtr> factors) -> ProductGroup;

    /// Advances t to the lexicographic successor inside the product; false on wrap-around.
    auto next_tuple(const ProductGroup & g, Tuple & t) -> bool;
}
