#include <cosetcsp/consistency.hpp>
#include <cosetcsp/error.hpp>
#include <cosetcsp/torus.hpp>

#include <algorithm>
#include <chrono>
#include <future>

using namespace cosetcsp;

using std::array;
using std::size_t;
using std::string;
using std::vector;

auto cosetcsp::to_string(SlotKind kind) -> const char *
{
    return kind == SlotKind::R ? "R" : "Rp";
}

auto cosetcsp::to_string(TwistVerdict verdict) -> const char *
{
    return verdict == TwistVerdict::Unsolvable ? "Unsolvable" : "NotApplicable";
}

namespace
{
    auto slot_of(size_t n, size_t position) -> Slot
    {
        auto nn = n * n;
        return Slot{ position < nn ? SlotKind::R : SlotKind::Rp, (position % nn) / n, position % n };
    }

    auto position_of(size_t n, const Slot & s) -> size_t
    {
        return (s.kind == SlotKind::R ? 0 : n * n) + (s.i % n) * n + (s.j % n);
    }
}

auto TorusSpec::slot(size_t position) const -> Slot
{
    return slot_of(n, position);
}

auto TorusSpec::position(const Slot & s) const -> size_t
{
    return position_of(n, s);
}

auto TorusSpec::shift(const Slot & s) const -> Tuple
{
    auto it = shifts.find(Slot{ s.kind, s.i % n, s.j % n });
    return it == shifts.end() ? adp.carrier_product().identity() : it->second;
}

auto TorusSpec::relation_at(const Slot & s) const -> CosetSet
{
    auto pi = shift(s);
    if (pi == adp.carrier_product().identity())
        return adp.relation;
    return translate(adp.relation, pi);
}

auto TorusSpec::elements_at(const Slot & s) const -> array<size_t, 3>
{
    auto nn = n * n;
    auto at = [&] (size_t block, size_t i, size_t j) { return block * nn + (i % n) * n + (j % n); };
    if (s.kind == SlotKind::R)
        return { at(0, s.i, s.j), at(1, s.i, s.j), at(2, s.i, s.j) };
    return { at(0, s.i, s.j + 1), at(1, s.i + 1, s.j), at(2, s.i, s.j) };
}

auto cosetcsp::make_torus_spec(size_t n, const AlmostDirectProduct & adp) -> TorusSpec
{
    TorusSpec spec{ n, adp, {} };
    validate_torus_spec(spec);
    return spec;
}

auto cosetcsp::validate_torus_spec(const TorusSpec & spec) -> void
{
    if (spec.n < 2)
        throw Error(ErrorCode::InvalidSpec, "torus size must be at least 2");
    if (spec.adp.relation.ambient().arity() != 3 || ! spec.adp.relation.is_subgroup())
        throw Error(ErrorCode::InvalidSpec, "torus relation must be a ternary subgroup");
    for (auto & [s, pi] : spec.shifts) {
        if (s.i >= spec.n || s.j >= spec.n)
            throw Error(ErrorCode::InvalidSpec, "slot index out of range");
        if (! spec.adp.carrier_product().contains(pi) || ! spec.adp.in_factors(pi))
            throw Error(ErrorCode::InvalidSpec, "twist must lie in S1 x S2 x S3");
    }
}

auto cosetcsp::build_torus(const TorusSpec & spec, CosetTemplate & t) -> Instance
{
    validate_torus_spec(spec);
    vector<string> signature(spec.adp.carriers.begin(), spec.adp.carriers.end());
    for (size_t k = 0 ; k < 3 ; ++k)
        if (! t.has_carrier(signature[k]) || ! (*t.carrier(signature[k]) == spec.adp.carrier_product().factor(k)))
            throw Error(ErrorCode::InvalidSpec, "template lacks carrier '" + signature[k] + "' of the relation");

    Instance result;
    auto n = spec.n;
    for (char block : { 'a', 'b', 'c' })
        for (size_t i = 0 ; i < n ; ++i)
            for (size_t j = 0 ; j < n ; ++j)
                result.elements.push_back(string(1, block) + std::to_string(i) + "_" + std::to_string(j));

    auto base = t.intern(signature, spec.adp.relation, "torus");
    for (size_t p = 0 ; p < spec.slot_count() ; ++p) {
        auto s = spec.slot(p);
        auto pi = spec.shift(s);
        auto name = pi == spec.adp.carrier_product().identity() ? base : t.intern(signature, spec.relation_at(s), base);
        auto e = spec.elements_at(s);
        result.constraints.push_back(Constraint{ name, { e[0], e[1], e[2] } });
    }
    return result;
}

auto cosetcsp::neighborhood_graph(size_t n, bool swapped) -> NeighborhoodGraph
{
    if (n < 2)
        throw Error(ErrorCode::InvalidSpec, "torus size must be at least 2");
    NeighborhoodGraph g{ n, {}, {} };
    for (size_t p = 0 ; p < 2 * n * n ; ++p) {
        auto s = slot_of(n, p);
        array<size_t, 3> adj;
        if (s.kind == SlotKind::R) {
            adj[0] = position_of(n, Slot{ SlotKind::Rp, s.i, s.j + n - 1 });
            adj[1] = position_of(n, Slot{ SlotKind::Rp, s.i + n - 1, s.j });
            adj[2] = position_of(n, Slot{ SlotKind::Rp, s.i, s.j });
        }
        else {
            adj[0] = position_of(n, Slot{ SlotKind::R, s.i, s.j + 1 });
            adj[1] = position_of(n, Slot{ SlotKind::R, s.i + 1, s.j });
            adj[2] = position_of(n, Slot{ SlotKind::R, s.i, s.j });
        }
        g.adjacency.push_back(adj);
        g.negative.push_back((s.kind == SlotKind::R) != swapped);
    }
    return g;
}

auto cosetcsp::neighbors(const TorusSpec & spec, const Slot & s) -> array<Slot, 3>
{
    auto g = neighborhood_graph(spec.n);
    auto & adj = g.adjacency[spec.position(s)];
    return { spec.slot(adj[0]), spec.slot(adj[1]), spec.slot(adj[2]) };
}

auto cosetcsp::check_small_triangulation(size_t n, const vector<size_t> & removed) -> size_t
{
    if (removed.size() >= n)
        throw Error(ErrorCode::PreconditionViolated, "fewer than n positions may be removed");
    auto g = neighborhood_graph(n);
    vector<char> gone(g.size(), 0);
    for (auto p : removed) {
        if (p >= g.size())
            throw Error(ErrorCode::PreconditionViolated, "no such position");
        gone[p] = 1;
    }

    size_t largest = 0;
    vector<char> seen(g.size(), 0);
    vector<size_t> queue;
    for (size_t start = 0 ; start < g.size() ; ++start) {
        if (gone[start] || seen[start])
            continue;
        queue.assign(1, start);
        seen[start] = 1;
        for (size_t q = 0 ; q < queue.size() ; ++q)
            for (auto next : g.adjacency[queue[q]])
                if (! gone[next] && ! seen[next]) {
                    seen[next] = 1;
                    queue.push_back(next);
                }
        largest = std::max(largest, queue.size());
    }
    return largest;
}

auto cosetcsp::twist(const TorusSpec & spec, const Slot & s, const Tuple & pi) -> TorusSpec
{
    auto & amb = spec.adp.carrier_product();
    if (! amb.contains(pi))
        throw Error(ErrorCode::InvalidSpec, "twist outside the carrier product");
    TorusSpec result = spec;
    Slot key{ s.kind, s.i % spec.n, s.j % spec.n };
    auto composed = amb.op(spec.shift(key), pi);
    if (composed == amb.identity())
        result.shifts.erase(key);
    else
        result.shifts[key] = composed;
    return result;
}

auto cosetcsp::single_twist_unsolvable(const TorusSpec & spec) -> TwistCertificate
{
    TwistCertificate cert;
    if (spec.adp.kind() == AdpKind::NotADP)
        return cert;
    vector<Slot> differing;
    for (auto & [s, pi] : spec.shifts)
        if (! spec.adp.relation.contains(pi))
            differing.push_back(s);
    if (differing.size() != 1)
        return cert;
    cert.verdict = TwistVerdict::Unsolvable;
    cert.twisted = differing.front();
    cert.swapped = differing.front().kind == SlotKind::Rp;
    return cert;
}

auto cosetcsp::telescoping_product(const TorusSpec & spec, const Assignment & h, const Slot & omitted,
        const vector<size_t> & order) -> Tuple
{
    auto & amb = spec.adp.carrier_product();
    auto g = neighborhood_graph(spec.n, omitted.kind == SlotKind::Rp);
    auto omitted_p = spec.position(omitted);
    if (h.element_count() != 3 * spec.n * spec.n || ! h.is_total())
        throw Error(ErrorCode::PreconditionViolated, "telescoping needs a total assignment of the torus");

    vector<size_t> positions = order;
    if (positions.empty())
        for (size_t p = 0 ; p < g.size() ; ++p)
            positions.push_back(p);
    auto sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    for (size_t p = 0 ; p < sorted.size() ; ++p)
        if (sorted.size() != g.size() || sorted[p] != p)
            throw Error(ErrorCode::PreconditionViolated, "order must be a permutation of the positions");

    auto triple = [&] (size_t p) {
        auto e = spec.elements_at(spec.slot(p));
        return Tuple{ h.at(e[0]), h.at(e[1]), h.at(e[2]) };
    };
    for (size_t p = 0 ; p < g.size() ; ++p)
        if (p != omitted_p && ! spec.relation_at(spec.slot(p)).contains(triple(p)))
            throw Error(ErrorCode::PreconditionViolated, "assignment violates a constraint other than the omitted one");

    auto product = amb.identity();
    for (auto p : positions) {
        if (p == omitted_p)
            continue;
        auto t = triple(p);
        product = amb.op(product, g.negative[p] ? amb.inverse(t) : t);
    }
    return product;
}

auto cosetcsp::check_telescoping(const TorusSpec & spec, const Assignment & h, const Slot & omitted,
        const vector<size_t> & order) -> TelescopingCheck
{
    TelescopingCheck result;
    result.product = telescoping_product(spec, h, omitted, order);
    auto e = spec.elements_at(omitted);
    Tuple omitted_triple{ h.at(e[0]), h.at(e[1]), h.at(e[2]) };
    result.product_in_r = spec.adp.relation.contains(result.product);
    result.omitted_in_r = spec.adp.relation.contains(omitted_triple);

    auto [subs, local_r] = spec.adp.local();
    auto q = quotient_adp(local_r);
    auto image = [&] (const Tuple & t) -> Tuple {
        Tuple local(3);
        for (size_t k = 0 ; k < 3 ; ++k) {
            auto v = subs[k].from_parent[t[k]];
            if (v < 0)
                throw Error(ErrorCode::PreconditionViolated, "value outside its factor subgroup");
            local[k] = static_cast<Element>(v);
        }
        return q.project(local);
    };
    result.product_image = image(result.product);
    result.omitted_image = image(omitted_triple);
    return result;
}

auto cosetcsp::lemma_1coord_witnesses(const AlmostDirectProduct & adp, const CosetSet & coset) -> array<Tuple, 3>
{
    auto id = adp.carrier_product().identity();
    array<std::optional<Tuple>, 3> found;
    for (auto & m : coset.members())
        for (size_t k = 0 ; k < 3 ; ++k) {
            bool others_trivial = true;
            for (size_t o = 0 ; o < 3 ; ++o)
                if (o != k && m[o] != id[o])
                    others_trivial = false;
            if (others_trivial && ! found[k])
                found[k] = m;
        }
    array<Tuple, 3> result;
    for (size_t k = 0 ; k < 3 ; ++k) {
        if (! found[k])
            throw Error(ErrorCode::AssertionFailure, "coset has no member with a single nontrivial coordinate");
        result[k] = *found[k];
    }
    return result;
}

namespace
{
    auto least_outside(const AlmostDirectProduct & adp) -> Tuple
    {
        for (auto & pi : adp.carrier_product().elements())
            if (adp.in_factors(pi) && ! adp.relation.contains(pi))
                return pi;
        throw Error(ErrorCode::PreconditionViolated, "R equals S1 x S2 x S3, so no twist exists");
    }

    auto run_variant(CosetTemplate t, const TorusSpec & spec, const string & variant, const ExperimentOptions & options) -> ExperimentRow
    {
        auto start = std::chrono::steady_clock::now();
        ExperimentRow row{ spec.n, variant, "", "", "", 0.0 };
        auto inst = build_torus(spec, t);
        try {
            row.solver = solve(inst, t, options.solve) ? "solvable" : "unsolvable";
        }
        catch (const Error & e) {
            if (e.code() != ErrorCode::BudgetExceeded)
                throw;
            row.solver = "budget_exceeded";
        }
        row.consistency = run_kl_consistency(inst, t, options.k, options.l).accept ? "accept" : "reject";
        row.certificate = to_string(single_twist_unsolvable(spec).verdict);
        if (options.timing)
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return row;
    }
}

auto cosetcsp::fooling_experiment(const CosetTemplate & t, const AlmostDirectProduct & adp, const ExperimentOptions & options)
    -> ExperimentReport
{
    if (adp.kind() == AdpKind::NotADP)
        throw Error(ErrorCode::PreconditionViolated, "fooling experiment needs an almost-direct product");
    if (options.n_min < 2 || options.n_min > options.n_max)
        throw Error(ErrorCode::PreconditionViolated, "bad torus size range");

    ExperimentReport report;
    report.twist_pi = least_outside(adp);

    vector<std::pair<TorusSpec, string>> work;
    for (size_t n = options.n_min ; n <= options.n_max ; ++n) {
        auto plain = make_torus_spec(n, adp);
        work.emplace_back(plain, "all_R");
        work.emplace_back(twist(plain, Slot{ SlotKind::R, 0, 0 }, report.twist_pi), "twist");
    }

    vector<ExperimentRow> rows(work.size());
    auto jobs = std::max<size_t>(1, options.jobs);
    for (size_t first = 0 ; first < work.size() ; first += jobs) {
        vector<std::future<ExperimentRow>> running;
        for (size_t w = first ; w < std::min(work.size(), first + jobs) ; ++w)
            running.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async,
                        run_variant, t, std::cref(work[w].first), std::cref(work[w].second), std::cref(options)));
        for (size_t w = 0 ; w < running.size() ; ++w)
            rows[first + w] = running[w].get();
    }
    report.rows = std::move(rows);

    for (auto & row : report.rows)
        if (row.variant == "twist" && row.consistency == "accept" && row.certificate == "Unsolvable" && row.solver != "solvable") {
            report.minimal_fooling_n = row.n;
            break;
        }
    return report;
}
