#include "cli.hpp"

#include <cosetcsp/error.hpp>
#include <cosetcsp/io.hpp>
#include <cosetcsp/polymorphism.hpp>
#include <cosetcsp/pp.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

using namespace cosetcsp;

using std::size_t;
using std::string;
using std::vector;

namespace fs = std::filesystem;

#ifndef COSETCSP_DEFAULT_CORPUS
#define COSETCSP_DEFAULT_CORPUS "corpus"
#endif

namespace
{
    struct Config
    {
        string template_path, instance_path, adp_path, spec_path, out_path;
        string slot, pi, n_range = "2..6", format = "human", equivariance;
        size_t k = 2, l = 3, n = 0, jobs = 1;
        std::uint64_t seed = 1, budget = 0;
        bool trace = false, no_timing = false;
    };

    auto corpus_dir() -> fs::path
    {
        if (auto env = std::getenv("COSETCSP_CORPUS") ; env && *env)
            return env;
        return COSETCSP_DEFAULT_CORPUS;
    }

    /// Path as given if it exists, else relative to `near`, else in the corpus.
    auto resolve(const string & path, const fs::path & near = {}) -> string
    {
        if (fs::exists(path))
            return path;
        if (! near.empty() && fs::exists(near / path))
            return (near / path).string();
        if (fs::exists(corpus_dir() / path))
            return (corpus_dir() / path).string();
        throw Error(ErrorCode::ParseError, "cannot find '" + path + "'");
    }

    auto parse_numbers(const string & text) -> vector<long long>
    {
        vector<long long> result;
        std::stringstream ss(text);
        string part;
        while (std::getline(ss, part, ','))
            try {
                size_t used = 0;
                result.push_back(std::stoll(part, &used));
                if (used != part.size())
                    throw std::invalid_argument(part);
            }
            catch (const std::exception &) {
                throw Error(ErrorCode::ParseError, "not a number list: '" + text + "'");
            }
        return result;
    }

    auto parse_range(const string & text) -> std::pair<size_t, size_t>
    {
        auto dots = text.find("..");
        try {
            if (dots == string::npos) {
                auto n = std::stoul(text);
                return { n, n };
            }
            return { std::stoul(text.substr(0, dots)), std::stoul(text.substr(dots + 2)) };
        }
        catch (const std::exception &) {
            throw Error(ErrorCode::ParseError, "bad range '" + text + "', expected a..b");
        }
    }

    auto parse_slot(const string & text) -> Slot
    {
        auto comma = text.find(',');
        if (comma == string::npos)
            throw Error(ErrorCode::ParseError, "slot is kind,i,j");
        auto rest = parse_numbers(text.substr(comma + 1));
        if (rest.size() != 2 || rest[0] < 0 || rest[1] < 0)
            throw Error(ErrorCode::ParseError, "slot is kind,i,j");
        Json j = Json::array({ text.substr(0, comma), rest[0], rest[1] });
        return slot_from_json(j);
    }

    auto solve_options(const Config & c) -> SolveOptions
    {
        SolveOptions o;
        if (c.budget)
            o.node_budget = c.budget;
        return o;
    }

    auto load_template(const Config & c) -> CosetTemplate
    {
        if (c.template_path.empty())
            throw Error(ErrorCode::ParseError, "--template is required");
        return template_from_json(load_json(resolve(c.template_path)));
    }

    auto load_instance(const Config & c, CosetTemplate & t, Json * raw = nullptr) -> Instance
    {
        if (c.instance_path.empty())
            throw Error(ErrorCode::ParseError, "--instance is required");
        auto j = load_json(resolve(c.instance_path));
        if (raw)
            *raw = j;
        return instance_from_json(j, t);
    }

    auto emit(std::ostream & out, const Json & j) -> void
    {
        out << j.dump() << '\n';
    }

    auto write_output(const Config & c, std::ostream & out, const Json & j) -> void
    {
        if (c.out_path.empty()) {
            out << j.dump(2) << '\n';
            return;
        }
        std::ofstream f(c.out_path);
        if (! f)
            throw Error(ErrorCode::ParseError, "cannot write '" + c.out_path + "'");
        f << j.dump(2) << '\n';
    }

    auto cmd_validate(const Config & c, std::ostream & out) -> int
    {
        auto report = validate_template(load_template(c));
        if (c.format == "json")
            emit(out, Json{ { "valid", report.valid }, { "violations", report.violations } });
        else {
            out << (report.valid ? "valid" : "invalid") << '\n';
            for (auto & v : report.violations)
                out << "  " << v << '\n';
        }
        return report.valid ? 0 : 1;
    }

    auto cmd_solve(const Config & c, std::ostream & out) -> int
    {
        auto t = load_template(c);
        auto i = load_instance(c, t);
        auto h = solve(i, t, solve_options(c));
        if (c.format == "json") {
            Json j{ { "solvable", h.has_value() } };
            if (h)
                j["values"] = assignment_to_json(*h, i).at("values");
            emit(out, j);
        }
        else if (h) {
            out << "solvable\n";
            for (size_t e = 0 ; e < i.size() ; ++e)
                out << "  " << i.elements[e] << " = " << h->at(e) << '\n';
        }
        else
            out << "unsolvable\n";
        return h ? 0 : 1;
    }

    auto random_pre_solution(const Instance & i, const CosetTemplate & t, std::mt19937_64 & rng) -> Assignment
    {
        auto groups = constraining_groups(i, t);
        Assignment s(i.size());
        for (size_t e = 0 ; e < i.size() ; ++e)
            s.set(e, static_cast<Element>(std::uniform_int_distribution<size_t>(0, groups[e]->order() - 1)(rng)));
        return s;
    }

    auto cmd_consistency(const Config & c, std::ostream & out) -> int
    {
        if (c.k == 0 || c.k > c.l)
            throw Error(ErrorCode::ParseError, "need 1 <= k <= l");
        auto t = load_template(c);
        auto i = normalize_instance(load_instance(c, t), t);
        if (! i.pp_constraints.empty())
            i = expand_pp_gadget(i, t);

        auto result = run_kl_consistency(i, t, c.k, c.l, ConsistencyOptions{ c.trace });
        if (c.trace) {
            size_t entry = 0, total = result.initial->total_size();
            for (size_t pass = 1 ; pass <= result.passes ; ++pass) {
                for ( ; entry < result.trace.size() && result.trace[entry].pass == pass ; ++entry) {
                    auto & e = result.trace[entry];
                    vector<string> ids;
                    for (auto x : e.after.elements)
                        ids.push_back(i.elements[x]);
                    total -= e.before - e.after.count;
                    emit(out, Json{ { "pass", pass }, { "stage", e.stage }, { "X", ids }, { "before", e.before }, { "after", e.after.count } });
                }
                emit(out, Json{ { "pass", pass }, { "removed", result.removed_per_pass[pass - 1] }, { "total", total } });
            }
        }

        bool equivariance_ok = true;
        if (! c.equivariance.empty()) {
            auto spec = parse_numbers(c.equivariance);
            if (spec.size() != 2 || spec[0] < 0 || spec[1] < 0)
                throw Error(ErrorCode::ParseError, "--assert-equivariance takes seed,count");
            std::mt19937_64 rng(static_cast<std::uint64_t>(spec[0]));
            for (long long n = 0 ; n < spec[1] && equivariance_ok ; ++n)
                equivariance_ok = check_equivariance(i, t, random_pre_solution(i, t, rng), c.k, c.l);
        }

        if (c.format == "json" || c.trace) {
            Json j{ { "verdict", result.accept ? "accept" : "reject" }, { "all_nonempty", result.all_nonempty },
                { "passes", result.passes }, { "stages", result.stages },
                { "emptied_at", result.emptied_at ? Json(*result.emptied_at) : Json() } };
            if (! c.equivariance.empty())
                j["equivariance"] = equivariance_ok;
            emit(out, j);
        }
        else {
            out << (result.accept ? "accept" : "reject") << " after " << result.passes << " pass(es), " << result.stages << " stages\n";
            if (! c.equivariance.empty())
                out << "equivariance " << (equivariance_ok ? "holds" : "FAILS") << '\n';
        }
        if (! equivariance_ok)
            return 4;
        return result.accept ? 0 : 1;
    }

    auto cmd_pipeline(const Config & c, std::ostream & out) -> int
    {
        auto t = load_template(c);
        std::optional<Instance> witness;
        std::optional<Assignment> anomaly;
        if (! c.instance_path.empty()) {
            Json raw;
            witness = load_instance(c, t, &raw);
            if (raw.contains("anomaly"))
                anomaly = assignment_from_json(raw.at("anomaly"), *witness);
        }
        PipelineOptions options;
        options.seed = c.seed;
        if (c.budget)
            options.search_budget = c.budget;
        auto result = helly_pipeline(t, witness, anomaly, options);
        if (! result) {
            if (c.format == "json")
                emit(out, Json{ { "anomaly", nullptr } });
            else
                out << "no anomaly found\n";
            return 1;
        }
        auto report = pipeline_to_json(*result);
        if (c.format == "json")
            emit(out, report);
        else {
            out << "classification " << report.at("classification").get<string>() << '\n';
            out << "reductions " << result->reductions << '\n';
            for (size_t k = 0 ; k < 3 ; ++k)
                out << "S" << k + 1 << " " << report.at("S")[k].dump() << '\n';
            out << "R " << report.at("R").dump() << '\n';
        }
        return 0;
    }

    /// The template for torus commands; the bundled T3 unless given.
    auto torus_template(const Config & c) -> CosetTemplate
    {
        Config d = c;
        if (d.template_path.empty())
            d.template_path = "t3.json";
        return load_template(d);
    }

    auto load_spec(const Config & c, const CosetTemplate & t) -> TorusSpec
    {
        if (! c.spec_path.empty()) {
            auto path = resolve(c.spec_path);
            auto near = fs::path(path).parent_path();
            return torus_spec_from_json(load_json(path), t, [&] (const string & ref) { return load_json(resolve(ref, near)); });
        }
        if (c.adp_path.empty() || c.n == 0)
            throw Error(ErrorCode::ParseError, "give --spec, or --adp with --n");
        return make_torus_spec(c.n, adp_from_json(load_json(resolve(c.adp_path)), t));
    }

    auto cmd_torus_gen(const Config & c, std::ostream & out) -> int
    {
        auto t = torus_template(c);
        auto base = t;
        auto spec = load_spec(c, t);
        auto i = build_torus(spec, t);
        write_output(c, out, instance_to_json(i, t, &base));
        return 0;
    }

    auto cmd_torus_twist(const Config & c, std::ostream & out) -> int
    {
        auto t = torus_template(c);
        auto spec = load_spec(c, t);
        auto pi = parse_numbers(c.pi);
        Tuple tuple;
        for (auto v : pi) {
            if (v < 0)
                throw Error(ErrorCode::ParseError, "negative group element");
            tuple.push_back(static_cast<Element>(v));
        }
        if (! spec.adp.carrier_product().contains(tuple) || ! spec.adp.in_factors(tuple))
            throw Error(ErrorCode::InvalidSpec, "twist must lie in S1 x S2 x S3");
        auto slot = parse_slot(c.slot);
        if (slot.i >= spec.n || slot.j >= spec.n)
            throw Error(ErrorCode::InvalidSpec, "slot index out of range");
        write_output(c, out, torus_spec_to_json(twist(spec, slot, tuple)));
        return 0;
    }

    auto cmd_torus_certify(const Config & c, std::ostream & out) -> int
    {
        auto t = torus_template(c);
        auto cert = single_twist_unsolvable(load_spec(c, t));
        if (c.format == "json") {
            Json j{ { "verdict", to_string(cert.verdict) } };
            if (cert.twisted) {
                j["slot"] = slot_to_json(*cert.twisted);
                j["swapped"] = cert.swapped;
            }
            emit(out, j);
        }
        else
            out << to_string(cert.verdict) << '\n';
        return cert.verdict == TwistVerdict::Unsolvable ? 0 : 1;
    }

    auto cmd_torus_experiment(const Config & c, std::ostream & out) -> int
    {
        if (c.k == 0 || c.k > c.l)
            throw Error(ErrorCode::ParseError, "need 1 <= k <= l");
        auto t = torus_template(c);
        Config d = c;
        if (d.adp_path.empty() && d.spec_path.empty())
            d.adp_path = "parity_adp.json";
        auto adp = d.spec_path.empty() ? adp_from_json(load_json(resolve(d.adp_path)), t) : load_spec(d, t).adp;

        ExperimentOptions options;
        options.k = c.k;
        options.l = c.l;
        std::tie(options.n_min, options.n_max) = parse_range(c.n_range);
        options.solve = solve_options(c);
        options.jobs = c.jobs;
        options.timing = ! c.no_timing;
        auto report = fooling_experiment(t, adp, options);
        for (auto & row : report.rows)
            emit(out, experiment_row_to_json(row));
        emit(out, Json{ { "twist_slot", slot_to_json(Slot{}) }, { "twist_pi", report.twist_pi },
                { "minimal_fooling_n", report.minimal_fooling_n ? Json(*report.minimal_fooling_n) : Json() } });
        return report.minimal_fooling_n ? 0 : 1;
    }

    auto exit_code(ErrorCode code) -> int
    {
        switch (code) {
            case ErrorCode::BudgetExceeded:
            case ErrorCode::CapExceeded:
                return 3;
            case ErrorCode::AssertionFailure:
                return 4;
            default:
                return 2;
        }
    }
}

auto cosetcsp_cli::run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err) -> int
{
    Config c;
    CLI::App app{ "Coset-template CSP experiments: solving, local consistency, anomalies and torus instances", "cosetcsp" };
    app.require_subcommand(1);

    auto add_format = [&] (CLI::App * s) {
        s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({ "human", "json" }));
    };
    auto add_template = [&] (CLI::App * s) {
        s->add_option("--template", c.template_path, "Template file (looked up in the corpus if not found)");
    };

    auto validate = app.add_subcommand("validate", "Check that a template is a coset template");
    add_template(validate);
    add_format(validate);

    auto solve_cmd = app.add_subcommand("solve", "Find the least solution of an instance");
    add_template(solve_cmd);
    solve_cmd->add_option("--instance", c.instance_path, "Instance file");
    solve_cmd->add_option("--budget", c.budget, "Search node budget");
    add_format(solve_cmd);

    auto consistency = app.add_subcommand("consistency", "Run (k,l)-consistency");
    add_template(consistency);
    consistency->add_option("--instance", c.instance_path, "Instance file");
    consistency->add_option("--k", c.k, "Family size bound");
    consistency->add_option("--l", c.l, "Window size");
    consistency->add_flag("--trace", c.trace, "Emit changed stages and pass summaries as JSON lines");
    consistency->add_option("--assert-equivariance", c.equivariance, "seed,count of random pre-solutions to check");
    add_format(consistency);

    auto pipeline = app.add_subcommand("pipeline", "Extract an almost-direct product from a (2,j)-anomaly");
    add_template(pipeline);
    pipeline->add_option("--instance", c.instance_path, "Witness instance, optionally carrying an \"anomaly\"");
    pipeline->add_option("--budget", c.budget, "Random instances to try without a witness");
    pipeline->add_option("--seed", c.seed, "Seed for the random search");
    add_format(pipeline);

    auto torus = app.add_subcommand("torus", "Torus instances");
    torus->require_subcommand(1);
    auto add_spec = [&] (CLI::App * s) {
        add_template(s);
        s->add_option("--spec", c.spec_path, "Torus spec file");
        s->add_option("--adp", c.adp_path, "Almost-direct product file");
        s->add_option("--n", c.n, "Torus size");
    };
    auto gen = torus->add_subcommand("gen", "Write the instance of a torus spec");
    add_spec(gen);
    gen->add_option("--out", c.out_path, "Output file (default stdout)");
    auto tw = torus->add_subcommand("twist", "Twist one slot of a torus spec");
    add_spec(tw);
    tw->add_option("--slot", c.slot, "Slot as kind,i,j with kind R or Rp")->required();
    tw->add_option("--pi", c.pi, "Twist as comma separated values")->required();
    tw->add_option("--out", c.out_path, "Output file (default stdout)");
    auto certify = torus->add_subcommand("certify", "Single-twist unsolvability certificate");
    add_spec(certify);
    add_format(certify);
    auto experiment = torus->add_subcommand("experiment", "Fooling experiment over a range of torus sizes");
    add_spec(experiment);
    experiment->add_option("--k", c.k, "Family size bound");
    experiment->add_option("--l", c.l, "Window size");
    experiment->add_option("--n-range", c.n_range, "Sizes as a..b");
    experiment->add_option("--jobs", c.jobs, "Torus variants run in parallel");
    experiment->add_option("--budget", c.budget, "Solver node budget per instance");
    experiment->add_flag("--no-timing", c.no_timing, "Report 0 seconds so output is reproducible");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed())
            return cmd_validate(c, out);
        if (solve_cmd->parsed())
            return cmd_solve(c, out);
        if (consistency->parsed())
            return cmd_consistency(c, out);
        if (pipeline->parsed())
            return cmd_pipeline(c, out);
        if (gen->parsed())
            return cmd_torus_gen(c, out);
        if (tw->parsed())
            return cmd_torus_twist(c, out);
        if (certify->parsed())
            return cmd_torus_certify(c, out);
        if (experiment->parsed())
            return cmd_torus_experiment(c, out);
    }
    catch (const Error & e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.code());
    }
    return 2;
}
