#include "oracles.hpp"

#include <cosetcsp/consistency.hpp>
#include <cosetcsp/error.hpp>
#include <cosetcsp/pp.hpp>
#include <cosetcsp/torus.hpp>

#include <doctest.h>

#include <numeric>

using namespace cosetcsp;

namespace
{
    auto load_adp(const std::string & name, const CosetTemplate & t) -> AlmostDirectProduct
    {
        return adp_from_json(load_json(oracle::corpus(name)), t);
    }

    auto id(char block, std::size_t i, std::size_t j) -> std::string
    {
        return std::string(1, block) + std::to_string(i) + "_" + std::to_string(j);
    }

    /// Components of the constraint graph (constraints adjacent when they share an
    /// element) with some constraints deleted, via union-find.
    auto largest_component(const Instance & torus, const std::vector<std::size_t> & removed) -> std::size_t
    {
        auto m = torus.constraints.size();
        std::vector<std::size_t> parent(m);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&] (std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<char> gone(m, 0);
        for (auto r : removed)
            gone[r] = 1;
        for (std::size_t p = 0 ; p < m ; ++p)
            for (std::size_t q = p + 1 ; q < m ; ++q) {
                if (gone[p] || gone[q])
                    continue;
                auto & a = torus.constraints[p].args;
                auto & b = torus.constraints[q].args;
                if (std::any_of(a.begin(), a.end(), [&] (auto e) { return std::find(b.begin(), b.end(), e) != b.end(); }))
                    parent[find(p)] = find(q);
            }
        std::vector<std::size_t> size(m, 0);
        std::size_t best = 0;
        for (std::size_t p = 0 ; p < m ; ++p)
            if (! gone[p])
                best = std::max(best, ++size[find(p)]);
        return best;
    }

    /// Rp-slot triples minus R-slot triples, omitting one R slot, from the instance
    /// alone. Only meaningful for abelian carriers.
    auto signed_sum(const Instance & torus, const ProductGroup & g, const std::vector<Element> & h, std::size_t omitted) -> Tuple
    {
        auto half = torus.constraints.size() / 2;
        auto acc = g.identity();
        for (std::size_t p = 0 ; p < torus.constraints.size() ; ++p) {
            if (p == omitted)
                continue;
            auto & args = torus.constraints[p].args;
            Tuple v{ h[args[0]], h[args[1]], h[args[2]] };
            acc = g.op(acc, p < half ? g.inverse(v) : v);
        }
        return acc;
    }

    auto punctured(Instance torus, std::size_t position) -> Instance
    {
        torus.constraints.erase(torus.constraints.begin() + static_cast<long>(position));
        return torus;
    }
}

TEST_CASE("torus layout")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    for (std::size_t n = 2 ; n <= 4 ; ++n) {
        auto spec = make_torus_spec(n, adp);
        auto torus = build_torus(spec, t);
        CHECK(torus.size() == 3 * n * n);
        CHECK(torus.constraints.size() == 2 * n * n);
        std::vector<int> uses(torus.size(), 0);
        for (std::size_t i = 0 ; i < n ; ++i)
            for (std::size_t j = 0 ; j < n ; ++j) {
                auto & r = torus.constraints[spec.position(Slot{ SlotKind::R, i, j })];
                CHECK(r.args == std::vector<std::size_t>{ torus.index_of(id('a', i, j)), torus.index_of(id('b', i, j)), torus.index_of(id('c', i, j)) });
                auto & rp = torus.constraints[spec.position(Slot{ SlotKind::Rp, i, j })];
                CHECK(rp.args == std::vector<std::size_t>{ torus.index_of(id('a', i, (j + 1) % n)),
                        torus.index_of(id('b', (i + 1) % n, j)), torus.index_of(id('c', i, j)) });
            }
        for (auto & c : torus.constraints)
            for (auto e : c.args)
                ++uses[e];
        CHECK(std::all_of(uses.begin(), uses.end(), [] (int u) { return u == 2; }));
        for (std::size_t p = 0 ; p < spec.slot_count() ; ++p)
            CHECK(spec.position(spec.slot(p)) == p);
        auto ids = identity_assignment(torus, t);
        CHECK(oracle::brute_partial(torus, t, ids));
    }
    CHECK_THROWS_AS(make_torus_spec(1, adp), Error);
}

TEST_CASE("neighbourhood graph matches shared elements")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    for (std::size_t n = 2 ; n <= 5 ; ++n) {
        auto spec = make_torus_spec(n, adp);
        auto torus = build_torus(spec, t);
        auto g = neighborhood_graph(n);
        for (std::size_t p = 0 ; p < g.size() ; ++p) {
            CHECK(g.negative[p] == (spec.slot(p).kind == SlotKind::R));
            auto & a = torus.constraints[p].args;
            for (std::size_t k = 0 ; k < 3 ; ++k) {
                auto q = g.adjacency[p][k];
                CHECK(g.negative[q] != g.negative[p]);
                // shares the k-th element
                CHECK(torus.constraints[q].args[k] == a[k]);
            }
        }
        auto swapped = neighborhood_graph(n, true);
        for (std::size_t p = 0 ; p < g.size() ; ++p)
            CHECK(swapped.negative[p] != g.negative[p]);
    }
}

TEST_CASE("property: small removals leave a large component")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    std::mt19937_64 rng(61);
    for (std::size_t n : { 3, 4, 5 }) {
        auto torus = build_torus(make_torus_spec(n, adp), t);
        for (int round = 0 ; round < 60 ; ++round) {
            auto j = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            std::vector<std::size_t> all(2 * n * n);
            std::iota(all.begin(), all.end(), 0);
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(j);
            auto got = check_small_triangulation(n, all);
            CHECK(got == largest_component(torus, all));
            CHECK(got >= 2 * n * n - j * j);
        }
    }
    CHECK_THROWS_AS(check_small_triangulation(3, { 0, 1, 2 }), Error);
}

TEST_CASE("twists and certificates")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    auto spec = make_torus_spec(3, adp);
    CHECK(single_twist_unsolvable(spec).verdict == TwistVerdict::NotApplicable);

    Slot s{ SlotKind::Rp, 1, 2 };
    auto once = twist(spec, s, { 1, 0, 0 });
    auto cert = single_twist_unsolvable(once);
    CHECK(cert.verdict == TwistVerdict::Unsolvable);
    REQUIRE(cert.twisted);
    CHECK(*cert.twisted == s);
    CHECK(cert.swapped);
    CHECK(twist(once, s, { 1, 0, 0 }).shifts.empty());

    // a shift inside R leaves the coset alone
    auto inside = twist(spec, s, { 1, 1, 0 });
    CHECK(inside.relation_at(s) == adp.relation);
    CHECK(single_twist_unsolvable(inside).verdict == TwistVerdict::NotApplicable);

    auto two = twist(once, Slot{ SlotKind::R, 0, 0 }, { 0, 0, 1 });
    CHECK(single_twist_unsolvable(two).verdict == TwistVerdict::NotApplicable);
    CHECK(solve(build_torus(two, t), t));

    auto bad = spec;
    bad.shifts[Slot{ SlotKind::R, 5, 0 }] = { 1, 0, 0 };
    CHECK_THROWS_AS(validate_torus_spec(bad), Error);
}

TEST_CASE("single twists on the 2-torus agree with brute force")
{
    for (auto [tname, aname] : { std::pair{ "t3.json", "parity_adp.json" } }) {
        auto t = oracle::corpus_template(tname);
        auto adp = load_adp(aname, t);
        auto spec = make_torus_spec(2, adp);
        auto plain = build_torus(spec, t);
        auto sols = oracle::brute_solutions(plain, t);
        // the solutions form a subgroup of Z2^12
        CHECK(! sols.empty());
        CHECK(sols.front() == std::vector<Element>(12, 0));
        CHECK(4096 % sols.size() == 0);

        for (auto & pi : adp.carrier_product().elements()) {
            if (adp.relation.contains(pi))
                continue;
            for (std::size_t p = 0 ; p < spec.slot_count() ; ++p) {
                auto twisted = twist(spec, spec.slot(p), pi);
                auto inst = build_torus(twisted, t);
                CHECK(oracle::brute_solutions(inst, t).empty());
                CHECK_FALSE(solve(inst, t));
                CHECK(single_twist_unsolvable(twisted).verdict == TwistVerdict::Unsolvable);
            }
        }
    }
}

TEST_CASE("Z4 tori")
{
    auto t = oracle::corpus_template("z4_sum.json");
    auto adp = load_adp("z4_adp.json", t);
    CHECK(adp.kind() == AdpKind::StrictADP);
    for (std::size_t n = 2 ; n <= 3 ; ++n) {
        auto spec = make_torus_spec(n, adp);
        auto sol = solve(build_torus(spec, t), t);
        REQUIRE(sol);
        CHECK(*sol == identity_assignment(build_torus(spec, t), t));
        auto twisted = twist(spec, Slot{ SlotKind::Rp, 1, 0 }, { 1, 0, 0 });
        // plain backtracking runs out of budget on the twisted Z4 3-torus
        if (n == 2)
            CHECK_FALSE(solve(build_torus(twisted, t), t));
        CHECK(single_twist_unsolvable(twisted).verdict == TwistVerdict::Unsolvable);
    }
}

TEST_CASE("telescoping on punctured tori")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    auto spec = make_torus_spec(2, adp);
    auto torus = build_torus(spec, t);
    Slot omitted{ SlotKind::R, 1, 0 };
    auto p = spec.position(omitted);
    auto sols = oracle::brute_solutions(punctured(torus, p), t);
    CHECK(sols.size() > oracle::brute_solutions(torus, t).size() / 2);
    std::mt19937_64 rng(67);
    for (auto & s : sols) {
        auto h = Assignment::total(s);
        auto check = check_telescoping(spec, h, omitted);
        CHECK(check.holds());
        auto e = spec.elements_at(omitted);
        CHECK(check.product == Tuple{ s[e[0]], s[e[1]], s[e[2]] });
        CHECK(check.product == signed_sum(torus, adp.carrier_product(), s, p));
        std::vector<std::size_t> order(spec.slot_count());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        CHECK(telescoping_product(spec, h, omitted, order) == check.product);
    }

    auto violating = Assignment::total(std::vector<Element>(12, 0));
    violating.set(0, 1);
    CHECK_THROWS_AS(telescoping_product(spec, violating, Slot{ SlotKind::R, 1, 1 }), Error);
}

TEST_CASE("telescoping over Z4 by sampled solutions")
{
    auto t = oracle::corpus_template("z4_sum.json");
    auto adp = load_adp("z4_adp.json", t);
    auto spec = make_torus_spec(3, adp);
    auto torus = build_torus(spec, t);
    Slot omitted{ SlotKind::R, 2, 1 };
    auto p = spec.position(omitted);
    auto open = punctured(torus, p);
    std::mt19937_64 rng(71);
    int checked = 0;
    for (int round = 0 ; round < 60 ; ++round) {
        Assignment seed(open.size());
        for (std::size_t e = 0 ; e < open.size() ; ++e)
            if (rng() % 3 == 0)
                seed.set(e, static_cast<Element>(rng() % 4));
        auto s = solve_extending(open, t, seed);
        if (! s)
            continue;
        ++checked;
        std::vector<Element> v(open.size());
        for (std::size_t e = 0 ; e < v.size() ; ++e)
            v[e] = s->at(e);
        auto check = check_telescoping(spec, *s, omitted);
        CHECK(check.holds());
        CHECK(check.product == signed_sum(torus, adp.carrier_product(), v, p));
    }
    CHECK(checked > 10);
}

TEST_CASE("one-coordinate witnesses")
{
    for (auto [tname, aname] : { std::pair{ "t3.json", "parity_adp.json" }, std::pair{ "z4_sum.json", "z4_adp.json" } }) {
        auto t = oracle::corpus_template(tname);
        auto adp = load_adp(aname, t);
        auto cosets = adp.cosets();
        CHECK(cosets.front() == adp.relation);
        for (auto & c : cosets) {
            auto w = lemma_1coord_witnesses(adp, c);
            for (std::size_t k = 0 ; k < 3 ; ++k) {
                CHECK(c.contains(w[k]));
                for (std::size_t o = 0 ; o < 3 ; ++o)
                    if (o != k)
                        CHECK(w[k][o] == 0);
            }
        }
    }
}

TEST_CASE("small fooling experiment")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    ExperimentOptions options;
    options.n_max = 3;
    options.timing = false;
    auto report = fooling_experiment(t, adp, options);
    CHECK(report.rows.size() == 4);
    REQUIRE(report.minimal_fooling_n);
    CHECK(*report.minimal_fooling_n == 2);
    CHECK_FALSE(adp.relation.contains(report.twist_pi));
    for (auto & row : report.rows) {
        CHECK(row.consistency == "accept");
        CHECK(row.seconds == 0.0);
        if (row.variant == "all_R") {
            CHECK(row.solver == "solvable");
            CHECK(row.certificate == "NotApplicable");
        }
        else {
            CHECK(row.solver == "unsolvable");
            CHECK(row.certificate == "Unsolvable");
        }
    }

    auto t2 = oracle::corpus_template("t3.json");
    auto not_adp = adp_from_relation({ "Z2", "Z2", "Z2" }, generate_subgroup(adp.carrier_product(), { { 1, 1, 1 } }));
    CHECK_THROWS_AS(fooling_experiment(t2, not_adp, options), Error);
}

TEST_CASE("twists as gadgets agree with materialized translates")
{
    auto t = oracle::corpus_template("t3.json");
    auto adp = load_adp("parity_adp.json", t);
    // odd parity of (x, y, z) from base relations only
    PPFormula odd{ 3, 2, { { "R_even", { 0, 1, 3 } }, { "R_even", { 3, 2, 4 } }, { "pi@Z2", { 4 } } } };
    CHECK(materialize_pp(t, odd) == translate(adp.relation, { 1, 0, 0 }));
    // the gadget's bound elements go last in the search order, which is too slow beyond n = 2
    auto spec = make_torus_spec(2, adp);
    for (std::size_t p = 0 ; p < spec.slot_count() ; ++p) {
        auto twisted = twist(spec, spec.slot(p), { 1, 0, 0 });
        auto materialized = build_torus(twisted, t);
        auto gadget = build_torus(spec, t);
        auto args = gadget.constraints[p].args;
        gadget.constraints.erase(gadget.constraints.begin() + static_cast<long>(p));
        gadget.pp_constraints.push_back(PPConstraint{ odd, args });
        CHECK(solve(materialized, t).has_value() == solve(gadget, t).has_value());
        CHECK_FALSE(solve(gadget, t));
    }
}
