#pragma once

#include <cosetcsp/anomaly.hpp>
#include <cosetcsp/consistency.hpp>
#include <cosetcsp/torus.hpp>

#include <json.hpp>

#include <functional>
#include <string>

namespace cosetcsp
{
    using Json = nlohmann::ordered_json;

    /// Throws ParseError.
    auto load_json(const std::string & path) -> Json;

    /// A preset name ("cyclic:4", "klein4", "symmetric:3"), {"preset": name} or
    /// {"label": ..., "table": [[...]]}. Throws ParseError or NotAGroup.
    auto group_from_json(const Json & j) -> GroupPtr;
    auto group_to_json(const FiniteGroup & g) -> Json;

    /// {"carriers": [{"name", "group"}], "relations": {name: {"signature", "tuples"}}}.
    /// Relations that are not cosets are kept so that validation can report them.
    auto template_from_json(const Json & j) -> CosetTemplate;
    auto template_to_json(const CosetTemplate & t) -> Json;

    auto relation_to_json(const Relation & r) -> Json;

    auto formula_from_json(const Json & j) -> PPFormula;
    auto formula_to_json(const PPFormula & f) -> Json;

    /// {"elements", "constraints": [{"rel", "args"}], "pp_constraints"?, "relations"?}.
    /// Embedded relations (for example translates written by the torus generator)
    /// are added to t unless t already has a relation of that name.
    auto instance_from_json(const Json & j, CosetTemplate & t) -> Instance;
    /// Embeds every used relation not present in `base`, when base is given.
    auto instance_to_json(const Instance & i, const CosetTemplate & t, const CosetTemplate * base = nullptr) -> Json;

    /// {"values": {element id: value}}.
    auto assignment_from_json(const Json & j, const Instance & i) -> Assignment;
    auto assignment_to_json(const Assignment & h, const Instance & i) -> Json;

    /// {"carriers": [3 names], "S": [[...] x3]?, "R": [[a,b,c], ...]}. Without "S"
    /// the factors are the projections of R. Throws InvalidSpec.
    auto adp_from_json(const Json & j, const CosetTemplate & t) -> AlmostDirectProduct;
    auto adp_to_json(const AlmostDirectProduct & adp) -> Json;

    auto extraction_to_json(const AdpExtraction & e) -> Json;
    auto pipeline_to_json(const PipelineResult & r) -> Json;

    auto slot_to_json(const Slot & s) -> Json;
    auto slot_from_json(const Json & j) -> Slot;

    /// {"n", "adp": file name or inline object, "twists": [{"slot": ["R"|"Rp", i, j], "pi": [...]}]}.
    /// Twists compose in the given order. `resolve` loads a referenced adp file.
    auto torus_spec_from_json(const Json & j, const CosetTemplate & t,
            const std::function<Json (const std::string &)> & resolve) -> TorusSpec;
    auto torus_spec_to_json(const TorusSpec & spec) -> Json;

    auto experiment_row_to_json(const ExperimentRow & row) -> Json;

    /// Families as {"X": [ids], "members": [[...]]} in storage order.
    auto families_to_json(const ConsistencyFamilies & f, const Instance & i) -> Json;
}
