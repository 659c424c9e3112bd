#include "oracles.hpp"

#include <cosetcsp/anomaly.hpp>
#include <cosetcsp/error.hpp>
#include <cosetcsp/pp.hpp>

#include <doctest.h>

using namespace cosetcsp;

namespace
{
    auto random_partial(const Instance & i, const CosetTemplate & t, std::mt19937_64 & rng) -> Assignment
    {
        auto s = oracle::random_pre_solution(i, t, rng);
        Assignment h(i.size());
        for (std::size_t e = 0 ; e < i.size() ; ++e)
            if (rng() % 2)
                h.set(e, s.at(e));
        return h;
    }

    auto parity_setup(CosetTemplate & t) -> std::pair<Instance, Assignment>
    {
        auto i = oracle::corpus_instance("parity5.json", t);
        return { i, oracle::corpus_anomaly("parity5.json", i) };
    }

    auto as_set(const CosetSet & c) -> std::set<Tuple>
    {
        return oracle::member_set(c.members());
    }
}

TEST_CASE("anomalies on the parity witness")
{
    auto t = oracle::corpus_template("t3.json");
    auto [i, h] = parity_setup(t);
    CHECK(h.domain() == std::vector<std::size_t>{ 0, 1, 2 });
    CHECK(is_anomaly(i, t, h, 2));
    CHECK(oracle::brute_is_anomaly(i, t, h, 2));
    CHECK(is_anomaly(i, t, h, 1));
    CHECK_FALSE(is_anomaly(i, t, h, 3));

    Assignment even(i.size());
    even.set(0, 1);
    even.set(1, 1);
    even.set(2, 0);
    CHECK_FALSE(is_anomaly(i, t, even, 2));
}

TEST_CASE("property: is_anomaly matches the definition")
{
    std::mt19937_64 rng(17);
    int positives = 0;
    for (auto name : { "t3.json", "t4.json", "z4_sum.json" }) {
        auto t = oracle::corpus_template(name);
        for (int round = 0 ; round < 150 ; ++round) {
            auto i = oracle::random_instance(t, rng);
            auto h = random_partial(i, t, rng);
            for (std::size_t k = 1 ; k <= 2 ; ++k) {
                bool expected = oracle::brute_is_anomaly(i, t, h, k);
                CHECK(is_anomaly(i, t, h, k) == expected);
                positives += expected;
            }
        }
    }
    CHECK(positives > 0);
}

TEST_CASE("first (2,3)-anomaly is lexicographically least")
{
    auto t = oracle::corpus_template("t3.json");
    auto [i, given] = parity_setup(t);
    auto w = find_kj_anomaly(i, t, 2, 3);
    REQUIRE(w);
    CHECK(w->k == 2);
    CHECK(w->j == 3);
    CHECK(oracle::brute_is_anomaly(i, t, w->h, 2));

    // the same search written out with bitmasks over domains in lex order
    std::optional<Assignment> expected;
    for (std::size_t a = 0 ; a < i.size() && ! expected ; ++a)
        for (std::size_t b = a + 1 ; b < i.size() && ! expected ; ++b)
            for (std::size_t c = b + 1 ; c < i.size() && ! expected ; ++c)
                for (unsigned v = 0 ; v < 8 && ! expected ; ++v) {
                    Assignment h(i.size());
                    h.set(a, v >> 2 & 1);
                    h.set(b, v >> 1 & 1);
                    h.set(c, v & 1);
                    if (oracle::brute_is_anomaly(i, t, h, 2))
                        expected = h;
                }
    REQUIRE(expected);
    CHECK(w->h == *expected);
    CHECK_FALSE(find_kj_anomaly(i, t, 2, 5));
    CHECK_THROWS_AS(find_kj_anomaly(i, t, 2, 6), Error);
}

TEST_CASE("property: T2 admits no Helly anomalies")
{
    auto t = oracle::corpus_template("t2.json");
    std::mt19937_64 rng(3);
    for (int round = 0 ; round < 80 ; ++round) {
        auto i = oracle::random_instance(t, rng, 6, 6);
        for (std::size_t j = 3 ; j <= std::min<std::size_t>(i.size(), 4) ; ++j)
            CHECK_FALSE(find_kj_anomaly(i, t, 2, j));
    }
}

TEST_CASE("shrinking")
{
    auto t4 = oracle::corpus_template("t4.json");
    auto i = oracle::corpus_instance("t4_parity.json", t4);
    auto h = oracle::corpus_anomaly("t4_parity.json", i);
    CHECK(oracle::brute_is_anomaly(i, t4, h, 2));
    auto w = shrink_anomaly(i, t4, h);
    CHECK(w.k == 3);
    CHECK(w.j == 4);
    CHECK(w.h == h);
    CHECK(oracle::brute_is_anomaly(i, t4, w.h, 3));

    auto t3 = oracle::corpus_template("t3.json");
    auto [p, ph] = parity_setup(t3);
    auto same = shrink_anomaly(p, t3, ph);
    CHECK(same.k == 2);
    CHECK(same.h == ph);

    Assignment none(p.size());
    none.set(0, 0);
    none.set(1, 0);
    none.set(2, 0);
    CHECK_THROWS_AS(shrink_anomaly(p, t3, none), Error);
}

TEST_CASE("property: shrinking yields a minimal witness")
{
    std::mt19937_64 rng(23);
    auto t = oracle::corpus_template("t4.json");
    int tried = 0;
    for (int round = 0 ; round < 400 && tried < 25 ; ++round) {
        auto i = oracle::random_instance(t, rng, 7, 4);
        auto h = random_partial(i, t, rng);
        if (h.domain_size() < 3 || ! oracle::brute_is_anomaly(i, t, h, 2))
            continue;
        ++tried;
        auto w = shrink_anomaly(i, t, h);
        CHECK(w.j == w.k + 1);
        CHECK(oracle::brute_is_anomaly(i, t, w.h, w.k));
        for (auto e : w.h.domain())
            CHECK(h.at(e) == w.h.at(e));
    }
    CHECK(tried > 0);
}

TEST_CASE("normalising to a subgroup instance")
{
    std::mt19937_64 rng(29);
    for (auto name : { "t3.json", "z4_sum.json" }) {
        auto t = oracle::corpus_template(name);
        for (int round = 0 ; round < 60 ; ++round) {
            auto i = oracle::random_instance(t, rng);
            auto sols = oracle::brute_solutions(i, t);
            if (sols.empty()) {
                CHECK_THROWS_AS(normalize_subgroup_instance(i, t), Error);
                continue;
            }
            auto shifted = normalize_subgroup_instance(i, t);
            CHECK(is_subgroup_instance(shifted.instance, t));
            auto moved = oracle::brute_solutions(shifted.instance, t);
            CHECK(moved.size() == sols.size());
            for (auto & s : sols)
                CHECK(oracle::brute_partial(shifted.instance, t, act_assignment(i, t, Assignment::total(s), shifted.shift)));
        }
    }
}

TEST_CASE("one reduction on the T4 witness")
{
    auto t = oracle::corpus_template("t4.json");
    auto i = oracle::corpus_instance("t4_parity.json", t);
    auto h = oracle::corpus_anomaly("t4_parity.json", i);
    REQUIRE(is_subgroup_instance(i, t));
    auto w = reduce_anomaly_step(i, t, h, 3);
    CHECK(w.k == 2);
    CHECK(w.j == 3);
    CHECK(w.instance.constraints.size() == i.constraints.size() + 1);
    CHECK(w.instance.constraints.back() == Constraint{ "1@Z2", { 0 } });
    CHECK_FALSE(w.h.has(0));
    CHECK(oracle::brute_is_anomaly(w.instance, t, w.h, 2));

    CHECK_THROWS_AS(reduce_anomaly_step(i, t, h, 2), Error);
    auto moved = act_instance(i, Assignment::total({ 1, 0, 0, 0, 0, 0 }), t);
    CHECK_FALSE(is_subgroup_instance(moved, t));
    CHECK_THROWS_AS(reduce_anomaly_step(moved, t, h, 3), Error);
}

TEST_CASE("extendable group")
{
    auto t = oracle::corpus_template("t3.json");
    auto [i, h] = parity_setup(t);
    auto H = extendable_group(i, t, { 0, 1, 2 });
    CHECK(H.is_subgroup());
    CHECK(H.members() == oracle::brute_projection(i, t, { 0, 1, 2 }));
    CHECK(H.members() == t.relation("R_even").set.members());

    auto ex = oracle::corpus_instance("example3.json", t);
    try {
        extendable_group(ex, t, { 0, 1, 2 });
        FAIL("expected EmptyH");
    }
    catch (const Error & e) {
        CHECK(e.code() == ErrorCode::EmptyH);
    }
}

TEST_CASE("extraction on the parity witness")
{
    auto t = oracle::corpus_template("t3.json");
    auto [i, h] = parity_setup(t);
    auto e = build_adp_from_anomaly(i, t, h);
    CHECK(e.kind == AdpKind::StrictADP);
    for (auto & s : e.adp.factors)
        CHECK(s.size() == 2);
    CHECK(e.adp.relation.members() == std::vector<Tuple>{ { 0, 0, 0 }, { 0, 1, 1 }, { 1, 0, 1 }, { 1, 1, 0 } });
    for (std::size_t k = 0 ; k < 3 ; ++k)
        CHECK(materialize_pp(t, e.factor_witnesses[k]) == e.adp.factors[k]);
    CHECK(materialize_pp(t, e.relation_witness) == e.adp.relation);
    CHECK(materialize_pp(t, e.extendable_witness) == e.extendable);
}

TEST_CASE("pipeline on the bundled witnesses")
{
    auto t3 = oracle::corpus_template("t3.json");
    auto [i, h] = parity_setup(t3);
    auto r = helly_pipeline(t3, i, h);
    REQUIRE(r);
    CHECK(r->reductions == 0);
    CHECK(r->extraction.kind == AdpKind::StrictADP);
    CHECK(as_set(r->extraction.adp.relation) == as_set(t3.relation("R_even").set));

    auto t4 = oracle::corpus_template("t4.json");
    auto j = oracle::corpus_instance("t4_parity.json", t4);
    auto r4 = helly_pipeline(t4, j, oracle::corpus_anomaly("t4_parity.json", j));
    REQUIRE(r4);
    CHECK(r4->reductions == 1);
    CHECK(r4->reductions <= r4->chain.front().j - 3);
    for (std::size_t w = 3 ; w < r4->chain.size() ; ++w)
        CHECK(r4->chain[w].k < r4->chain[w - 1].k);
    auto & last = r4->chain.back();
    CHECK(last.k == 2);
    CHECK(oracle::brute_is_anomaly(last.instance, t4, last.h, 2));
    CHECK(r4->extraction.kind == AdpKind::StrictADP);

    auto t2 = oracle::corpus_template("t2.json");
    CHECK_FALSE(helly_pipeline(t2, std::nullopt, std::nullopt));

    Assignment bogus(i.size());
    bogus.set(0, 0);
    bogus.set(1, 0);
    bogus.set(2, 0);
    CHECK_THROWS_AS(helly_pipeline(t3, i, bogus), Error);
}

TEST_CASE("property: random search extracts almost-direct products")
{
    for (auto name : { "t3.json", "t4.json", "z4_sum.json" }) {
        for (std::uint64_t seed = 1 ; seed <= 4 ; ++seed) {
            auto t = oracle::corpus_template(name);
            PipelineOptions options;
            options.seed = seed;
            auto r = helly_pipeline(t, std::nullopt, std::nullopt, options);
            REQUIRE(r);
            auto & x = r->extraction;
            auto [subs, local] = x.adp.local();
            CHECK(oracle::adp_by_definition(local.ambient(), as_set(local)) != oracle::Adp::No);
            CHECK(oracle::is_subgroup_by_definition(x.extendable.ambient(), as_set(x.extendable)));
            for (auto & w : r->chain)
                CHECK(is_anomaly(w.instance, t, w.h, w.k));
            CHECK(materialize_pp(t, x.relation_witness) == x.adp.relation);
        }
    }
}
