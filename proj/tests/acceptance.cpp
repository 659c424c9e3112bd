// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Time limits are wall-clock and fixed here.

#include "oracles.hpp"

#include <cosetcsp/anomaly.hpp>
#include <cosetcsp/consistency.hpp>
#include <cosetcsp/error.hpp>
#include <cosetcsp/polymorphism.hpp>
#include <cosetcsp/pp.hpp>
#include <cosetcsp/torus.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace cosetcsp;

namespace
{
    struct Outcome
    {
        bool ok = true;
        std::ostringstream note;

        auto require(bool condition, const std::string & what) -> void
        {
            if (! condition && ok) {
                ok = false;
                note << "first failure: " << what << "; ";
            }
        }
    };

    struct Criterion
    {
        int number;
        std::string title;
        double limit_seconds;   // 0 means no time bound
        std::function<void (Outcome &)> body;
    };

    auto bundled_groups() -> std::vector<std::pair<std::string, GroupPtr>>
    {
        std::vector<std::pair<std::string, GroupPtr>> result;
        auto doc = load_json(oracle::corpus("groups.json"));
        for (auto & g : doc.at("groups"))
            result.emplace_back(g.at("name").get<std::string>(), group_from_json(g.at("group")));
        return result;
    }

    auto load_adp(const std::string & name, const CosetTemplate & t) -> AlmostDirectProduct
    {
        return adp_from_json(load_json(oracle::corpus(name)), t);
    }

    auto group_laws(const FiniteGroup & g) -> bool
    {
        auto n = g.order();
        for (Element a = 0 ; a < n ; ++a) {
            if (g.op(a, g.identity()) != a || g.op(g.identity(), a) != a)
                return false;
            if (g.op(a, g.inverse(a)) != g.identity())
                return false;
            for (Element b = 0 ; b < n ; ++b)
                for (Element c = 0 ; c < n ; ++c)
                    if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c)))
                        return false;
        }
        return true;
    }

    auto cyclic_subgroup(const ProductGroup & g, const Tuple & x) -> std::vector<Tuple>
    {
        std::vector<Tuple> result{ g.identity() };
        for (auto y = x ; y != g.identity() ; y = g.op(y, x))
            result.push_back(y);
        return result;
    }

    auto criterion_group_core(Outcome & o) -> void
    {
        auto groups = bundled_groups();
        for (auto & [name, g] : groups)
            o.require(group_laws(*g), "group laws of " + name);

        std::size_t products = 0, translates = 0;
        for (std::size_t x = 0 ; x < groups.size() ; ++x)
            for (std::size_t y = 0 ; y < groups.size() ; ++y)
                for (std::size_t z = 0 ; z < groups.size() ; ++z) {
                    ProductGroup p{ { groups[x].second, groups[y].second, groups[z].second } };
                    if (p.order() > 64 && ! (x == y && y == z))
                        continue;
                    ++products;
                    auto label = groups[x].first + "x" + groups[y].first + "x" + groups[z].first;
                    auto elements = p.elements();
                    for (auto & a : elements) {
                        o.require(p.op(a, p.inverse(a)) == p.identity(), "inverse in " + label);
                        o.require(p.decode(p.encode(a)) == a, "encoding in " + label);
                    }
                    // every cyclic subgroup is classified a subgroup and all its cosets as cosets
                    std::set<std::set<Tuple>> seen;
                    for (auto & a : elements) {
                        auto members = cyclic_subgroup(p, a);
                        if (! seen.insert(oracle::member_set(members)).second)
                            continue;
                        auto h = classify_subset(p, members);
                        o.require(h.is_subgroup(), "cyclic subgroup in " + label);
                        o.require(generate_subgroup(p, { a }) == h, "generated subgroup in " + label);
                        // one translate per coset; the others repeat it
                        std::set<Tuple> covered;
                        for (auto & pi : elements) {
                            if (covered.contains(pi))
                                continue;
                            auto c = translate(h, pi);
                            covered.insert(c.members().begin(), c.members().end());
                            ++translates;
                            auto cs = oracle::member_set(c.members());
                            o.require(c.is_coset() && oracle::is_coset_by_definition(p, cs) && oracle::malcev_closed(p, cs),
                                    "translate in " + label);
                            o.require(c.is_subgroup() == c.contains(p.identity()), "subgroup iff identity in " + label);
                            o.require(translate(c, p.inverse(pi)) == h, "translate inverse in " + label);
                        }
                    }
                }

        // random subsets, mostly non-cosets, checked against the definition
        for (auto & [name, g] : groups) {
            ProductGroup p{ { g, g, g } };
            auto elements = p.elements();
            std::mt19937_64 rng(101);
            for (int round = 0 ; round < 200 ; ++round) {
                std::vector<Tuple> members;
                for (auto & e : elements)
                    if (rng() % 5 == 0)
                        members.push_back(e);
                if (members.empty())
                    continue;
                auto c = classify_subset(p, members);
                auto cs = oracle::member_set(members);
                o.require(c.is_coset() == oracle::is_coset_by_definition(p, cs), "random subset of " + name + "^3");
                o.require(c.is_coset() == oracle::malcev_closed(p, cs), "malcev on " + name + "^3");
            }
        }

        // the derived count on Z2 x Z2
        auto z2 = std::make_shared<const FiniteGroup>(cyclic_group(2));
        ProductGroup v{ { z2, z2 } };
        auto elements = v.elements();
        int cosets = 0, expected = 0;
        for (unsigned mask = 1 ; mask < 16 ; ++mask) {
            std::vector<Tuple> members;
            for (unsigned b = 0 ; b < 4 ; ++b)
                if (mask >> b & 1)
                    members.push_back(elements[b]);
            cosets += classify_subset(v, members).is_coset();
            expected += oracle::is_coset_by_definition(v, oracle::member_set(members));
        }
        o.require(cosets == 11 && expected == 11, "11 of 15 subsets of Z2^2 are cosets");
        o.note << products << " products, " << translates << " translates, " << cosets << "/15 cosets of Z2^2";
    }

    auto criterion_adp_sweep(Outcome & o) -> void
    {
        auto z2 = std::make_shared<const FiniteGroup>(cyclic_group(2));
        auto z4 = std::make_shared<const FiniteGroup>(cyclic_group(4));
        std::vector<ProductGroup> ambients{ ProductGroup{ { z2, z2, z2 } }, ProductGroup{ { z4, z2, z2 } },
            ProductGroup{ { z2, z4, z2 } }, ProductGroup{ { z2, z2, z4 } } };
        std::size_t subgroups = 0, adps = 0;
        for (auto & amb : ambients)
            for (auto & s : oracle::all_subgroups(amb)) {
                ++subgroups;
                auto h = classify_subset(amb, { s.begin(), s.end() });
                auto kind = classify_almost_direct(h);
                auto by_definition = oracle::adp_by_definition(amb, s);
                o.require((kind == AdpKind::NotADP) == (by_definition == oracle::Adp::No), "ADP classification");
                if (kind == AdpKind::NotADP)
                    continue;
                ++adps;
                auto q = quotient_adp(h);
                auto image = oracle::member_set(q.image.members());
                o.require(oracle::adp_by_definition(q.target, image) == oracle::Adp::Strict, "quotient is strict");
                for (auto & a : image)
                    for (auto & b : image)
                        o.require(q.target.op(a, b) == q.target.op(b, a), "quotient is commutative");
                for (auto & m : s)
                    o.require(image.contains(q.project(m)), "projection lands in the image");
            }
        o.require(adps > 0, "some ADP exists");
        o.note << subgroups << " subgroups, " << adps << " ADPs";
    }

    auto criterion_helly_frontier(Outcome & o) -> void
    {
        auto t2 = oracle::corpus_template("t2.json");
        auto m = find_majority_polymorphism(t2);
        o.require(m.has_value() && is_majority_polymorphism(t2, *m), "majority for T2");
        for (auto name : { "t3.json", "t4.json" })
            o.require(! find_majority_polymorphism(oracle::corpus_template(name)), std::string("no majority for ") + name);
        o.note << "T2 has a majority polymorphism, T3 and T4 none";
    }

    auto criterion_pipeline(Outcome & o) -> void
    {
        auto t3 = oracle::corpus_template("t3.json");
        auto i = oracle::corpus_instance("parity5.json", t3);
        auto r = helly_pipeline(t3, i, oracle::corpus_anomaly("parity5.json", i));
        o.require(r.has_value(), "pipeline on the T3 witness");
        if (! r)
            return;
        auto & x = r->extraction;
        for (auto & s : x.adp.factors)
            o.require(s.members() == std::vector<Tuple>{ { 0 }, { 1 } }, "S_i = Z2");
        std::set<Tuple> even{ { 0, 0, 0 }, { 0, 1, 1 }, { 1, 0, 1 }, { 1, 1, 0 } };
        o.require(oracle::member_set(x.adp.relation.members()) == even, "R is even parity");
        o.require(x.kind == AdpKind::StrictADP, "StrictADP");
        for (std::size_t k = 0 ; k < 3 ; ++k)
            o.require(materialize_pp(t3, x.factor_witnesses[k]) == x.adp.factors[k], "S witness round trip");
        o.require(materialize_pp(t3, x.relation_witness) == x.adp.relation, "R witness round trip");
        o.require(materialize_pp(t3, x.extendable_witness) == x.extendable, "H witness round trip");

        auto t4 = oracle::corpus_template("t4.json");
        auto j = oracle::corpus_instance("t4_parity.json", t4);
        auto r4 = helly_pipeline(t4, j, oracle::corpus_anomaly("t4_parity.json", j));
        o.require(r4.has_value(), "pipeline on the T4 witness");
        if (! r4)
            return;
        o.require(r4->reductions >= 1, "a reduction fires on T4");
        auto & last = r4->chain.back();
        o.require(oracle::brute_is_anomaly(last.instance, t4, last.h, last.k), "final witness is an anomaly by brute force");
        o.note << "T3: " << to_string(x.kind) << ", T4: " << r4->reductions << " reduction(s), " << to_string(r4->extraction.kind);
    }

    auto criterion_torus(Outcome & o) -> void
    {
        auto t = oracle::corpus_template("t3.json");
        auto adp = load_adp("parity_adp.json", t);
        for (std::size_t n = 2 ; n <= 4 ; ++n) {
            auto inst = build_torus(make_torus_spec(n, adp), t);
            auto s = solve(inst, t);
            o.require(s && *s == identity_assignment(inst, t), "all-R torus solvable by identity");
        }
        std::size_t checked = 0;
        for (std::size_t n = 2 ; n <= 3 ; ++n) {
            auto spec = make_torus_spec(n, adp);
            for (auto & pi : adp.carrier_product().elements()) {
                if (adp.relation.contains(pi) || ! adp.in_factors(pi))
                    continue;
                for (std::size_t p = 0 ; p < spec.slot_count() ; ++p) {
                    auto twisted = twist(spec, spec.slot(p), pi);
                    auto inst = build_torus(twisted, t);
                    bool cert = single_twist_unsolvable(twisted).verdict == TwistVerdict::Unsolvable;
                    bool solver_rejects = ! solve(inst, t);
                    bool agree = cert && solver_rejects;
                    if (n == 2)
                        agree = agree && oracle::brute_solutions(inst, t).empty();
                    o.require(agree, "twist at n=" + std::to_string(n) + " position " + std::to_string(p));
                    ++checked;
                }
            }
        }
        o.note << checked << " single twists, certificate and solver agree";
    }

    auto criterion_telescoping(Outcome & o) -> void
    {
        auto t = oracle::corpus_template("t3.json");
        auto adp = load_adp("parity_adp.json", t);
        std::mt19937_64 rng(7);
        std::size_t checked = 0;

        auto check_one = [&] (const TorusSpec & spec, const Assignment & h, const Slot & omitted) {
            auto c = check_telescoping(spec, h, omitted);
            o.require(c.holds(), "telescoping identity");
            std::vector<std::size_t> order(spec.slot_count());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            o.require(check_telescoping(spec, h, omitted, order).product == c.product, "order independence");
            ++checked;
        };

        auto spec2 = make_torus_spec(2, adp);
        auto torus2 = build_torus(spec2, t);
        for (std::size_t i = 0 ; i < 2 ; ++i)
            for (std::size_t j = 0 ; j < 2 ; ++j) {
                Slot omitted{ SlotKind::R, i, j };
                auto open = torus2;
                open.constraints.erase(open.constraints.begin() + static_cast<long>(spec2.position(omitted)));
                for (auto & s : oracle::brute_solutions(open, t))
                    check_one(spec2, Assignment::total(s), omitted);
            }
        auto exhaustive = checked;

        auto spec3 = make_torus_spec(3, adp);
        auto torus3 = build_torus(spec3, t);
        Slot omitted{ SlotKind::R, 1, 1 };
        auto open = torus3;
        open.constraints.erase(open.constraints.begin() + static_cast<long>(spec3.position(omitted)));
        std::set<std::vector<Element>> sampled;
        for (int round = 0 ; round < 5000 && sampled.size() < 150 ; ++round) {
            Assignment seed(open.size());
            for (std::size_t e = 0 ; e < open.size() ; ++e)
                if (rng() % 3 == 0)
                    seed.set(e, static_cast<Element>(rng() % 2));
            auto s = solve_extending(open, t, seed);
            if (! s)
                continue;
            std::vector<Element> v(open.size());
            for (std::size_t e = 0 ; e < v.size() ; ++e)
                v[e] = s->at(e);
            if (sampled.insert(v).second)
                check_one(spec3, *s, omitted);
        }
        o.require(sampled.size() >= 100, "at least 100 sampled solutions at n=3");
        o.note << exhaustive << " punctured 2-torus solutions, " << sampled.size() << " sampled at n=3";
    }

    auto criterion_triangulation(Outcome & o) -> void
    {
        std::size_t cases = 0;
        std::size_t n = 4, positions = 2 * n * n;
        std::vector<std::size_t> removed;
        std::function<void (std::size_t)> all_sets = [&] (std::size_t from) {
            auto j = removed.size();
            o.require(check_small_triangulation(n, removed) >= positions - j * j, "n=4 exhaustive");
            ++cases;
            if (j == 3)
                return;
            for (std::size_t p = from ; p < positions ; ++p) {
                removed.push_back(p);
                all_sets(p + 1);
                removed.pop_back();
            }
        };
        all_sets(0);

        std::mt19937_64 rng(13);
        for (std::size_t m : { 6, 8 }) {
            std::vector<std::size_t> all(2 * m * m);
            std::iota(all.begin(), all.end(), 0);
            for (int round = 0 ; round < 1000 ; ++round) {
                auto j = std::uniform_int_distribution<std::size_t>(1, m - 1)(rng);
                std::shuffle(all.begin(), all.end(), rng);
                std::vector<std::size_t> r(all.begin(), all.begin() + static_cast<long>(j));
                o.require(check_small_triangulation(m, r) >= 2 * m * m - j * j, "random removal n=" + std::to_string(m));
                ++cases;
            }
        }
        o.note << cases << " removal sets";
    }

    struct CorpusInstance
    {
        std::string name;
        CosetTemplate t;
        Instance i;
    };

    /// Every instance the corpus provides, with the torus specs built out.
    auto corpus_instances() -> std::vector<CorpusInstance>
    {
        std::vector<CorpusInstance> result;
        for (auto [tname, iname] : { std::pair{ "t3.json", "example3.json" }, { "t3.json", "parity5.json" }, { "t4.json", "t4_parity.json" } }) {
            auto t = oracle::corpus_template(tname);
            auto i = normalize_instance(oracle::corpus_instance(iname, t), t);
            result.push_back({ iname, t, i });
        }
        auto resolve = [] (const std::string & ref) { return load_json(oracle::corpus(ref)); };
        for (auto [tname, sname] : { std::pair{ "t3.json", "torus_parity_n2_twist.json" }, { "t3.json", "torus_parity_n3.json" },
                { "z4_sum.json", "torus_z4_n2_twist.json" } }) {
            auto t = oracle::corpus_template(tname);
            auto spec = torus_spec_from_json(load_json(oracle::corpus(sname)), t, resolve);
            auto i = build_torus(spec, t);
            result.push_back({ sname, t, i });
        }
        return result;
    }

    auto criterion_equivariance(Outcome & o) -> void
    {
        auto pool = corpus_instances();
        std::mt19937_64 rng(2024);
        std::size_t pairs = 0, triples = 0;
        for (int round = 0 ; round < 100 ; ++round) {
            auto & c = pool[rng() % pool.size()];
            auto s = oracle::random_pre_solution(c.i, c.t, rng);
            o.require(check_equivariance(c.i, c.t, s, 2, 3), "equivariance on " + c.name);
            ++pairs;
        }

        std::vector<CorpusInstance *> solvable;
        for (auto & c : pool)
            if (solve(c.i, c.t))
                solvable.push_back(&c);
        while (triples < 1000) {
            auto & c = *solvable[rng() % solvable.size()];
            Assignment seed(c.i.size());
            auto groups = constraining_groups(c.i, c.t);
            for (std::size_t e = 0 ; e < c.i.size() ; ++e)
                if (rng() % 4 == 0)
                    seed.set(e, static_cast<Element>(rng() % groups[e]->order()));
            auto h = solve_extending(c.i, c.t, seed);
            if (! h)
                continue;
            auto s = oracle::random_pre_solution(c.i, c.t, rng);
            auto moved = act_instance(c.i, s, c.t);
            auto hs = act_assignment(c.i, c.t, *h, s);
            o.require(hs.is_total() && oracle::brute_partial(moved, c.t, hs), "action on a solution of " + c.name);
            ++triples;
        }
        o.note << pairs << " equivariance pairs, " << triples << " action triples";
    }

    auto criterion_fooling(Outcome & o) -> void
    {
        auto t = oracle::corpus_template("t3.json");
        auto adp = load_adp("parity_adp.json", t);
        ExperimentOptions options;
        options.n_min = 2;
        options.n_max = 6;
        auto report = fooling_experiment(t, adp, options);
        o.require(report.minimal_fooling_n.has_value(), "a fooling size exists");
        if (! report.minimal_fooling_n)
            return;
        auto n = *report.minimal_fooling_n;
        o.require(n <= 6, "fooling size at most 6");
        for (auto & row : report.rows)
            if (row.n == n && row.variant == "twist") {
                o.require(row.consistency == "accept", "consistency accepts the twisted torus");
                o.require(row.certificate == "Unsolvable", "certificate refutes it");
                o.require(row.solver == "unsolvable", "solver refutes it");
            }
        o.note << "minimal fooling n = " << n;
    }

    auto criterion_consistency_claims(Outcome & o) -> void
    {
        std::mt19937_64 rng(99);
        std::size_t accepting = 0, samples = 0;
        for (auto & c : corpus_instances()) {
            for (auto [k, l] : { std::pair<std::size_t, std::size_t>{ 1, 2 }, { 2, 3 } }) {
                auto r = run_kl_consistency(c.i, c.t, k, l);
                o.require(r.accept == r.all_nonempty, "verdict matches nonemptiness on " + c.name);
                if (! r.accept)
                    continue;
                ++accepting;
                auto id = identity_assignment(c.i, c.t);
                for (int round = 0 ; round < 20 ; ++round) {
                    auto s = oracle::random_pre_solution(c.i, c.t, rng);
                    for (std::size_t e = 0 ; e < c.i.size() ; ++e)
                        if (rng() % 2)
                            s.set(e, id.at(e));
                    o.require(check_locality(r.families, c.i, c.t, s), "locality on " + c.name);
                    ++samples;
                }
            }
        }
        o.require(accepting > 0, "some accepting fixpoint");
        o.note << accepting << " accepting fixpoints, " << samples << " fixing pre-solutions";
    }
}

auto main() -> int
{
    std::vector<Criterion> criteria{
        { 1, "group-core laws", 5, criterion_group_core },
        { 2, "ADP sweep", 30, criterion_adp_sweep },
        { 3, "2-Helly frontier", 60, criterion_helly_frontier },
        { 4, "anomaly pipeline", 60, criterion_pipeline },
        { 5, "torus correctness", 120, criterion_torus },
        { 6, "telescoping identity", 0, criterion_telescoping },
        { 7, "small triangulation", 0, criterion_triangulation },
        { 8, "equivariance", 0, criterion_equivariance },
        { 9, "fooling demonstration", 300, criterion_fooling },
        { 10, "consistency internal claims", 0, criterion_consistency_claims },
    };

    int failures = 0;
    for (auto & c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        }
        catch (const std::exception & e) {
            o.ok = false;
            o.note << "exception: " << e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
            o.ok = false;
            o.note << "; over the time limit";
        }
        failures += ! o.ok;
        char timing[64];
        if (c.limit_seconds > 0)
            std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", seconds, c.limit_seconds);
        else
            std::snprintf(timing, sizeof timing, "%.2f s", seconds);
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.number << " " << c.title << " (" << timing << ") "
            << o.note.str() << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
