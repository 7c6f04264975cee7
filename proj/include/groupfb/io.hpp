#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "groupfb/crystal.hpp"

namespace groupfb {

using json = nlohmann::ordered_json;

/// 17-significant-digit deterministic JSON text. Non-finite numbers are
/// rejected so that every report round-trips exactly.
std::string write_json(const json& value);

/// FNV-1a 64-bit digest as 16 hex characters, used to stamp inputs into
/// reports.
std::string fnv1a_hex(const std::string& bytes);

/// Strict object access: throws ValidationError on unknown keys.
void expect_keys(const json& object, const std::vector<std::string>& allowed,
                 const std::string& context);

json complex_to_json(const cdouble& z);
cdouble complex_from_json(const json& j, const std::string& context);

json cvector_to_json(const CVector& v);
CVector cvector_from_json(const json& j, const std::string& context);

/// Group specs: {"moduli": [...], "H_table": [[...]], "action": {"h":
/// matrix-or-permutation}}. A matrix is an array of arrays, a permutation a
/// flat array over linear indices of N.
GroupPtr group_from_json(const json& j);
json group_to_json(const SemidirectGroup& group);

/// Signals as [re, im] pair arrays, n-major h-minor.
GSignal gsignal_from_json(const json& j, const GroupPtr& group, const std::string& context);
json gsignal_to_json(const GSignal& signal);

std::vector<GSignal> bank_from_json(const json& j, const GroupPtr& group,
                                    const std::string& context);
json bank_to_json(const std::vector<GSignal>& bank);

/// Crystal specs: {"d":, "q":, "M": [[..]], "Gamma": [[[..]],...],
/// optional "generator"/"probes"/"points"}.
CrystalSpec crystal_spec_from_json(const json& j);
json crystal_spec_to_json(const CrystalSpec& spec);

/// Sampling problems: either an explicit representation
/// {"rep": {"group": ..., "matrices": [...]}} or a named constructor
/// {"rep": {"quasi_regular": <crystal spec>}}, plus generator and probes or
/// points.
struct ProblemBundle {
    std::optional<CrystalModel> crystal;
    SamplingProblem problem;
};
ProblemBundle sampling_problem_from_json(const json& j, std::uint64_t default_seed,
                                         double frame_tolerance = kFrameTolerance);

json spectral_bounds_to_json(const SpectralBounds& bounds);
json riesz_bounds_to_json(const RieszBounds& bounds);
json frame_report_to_json(const FrameReport& report);
json pr_report_to_json(const PrReport& report);
json demo_report_to_json(const DemoReport& report);

/// Stacked CSV of a polyphase field: gamma, row, col, re, im.
std::string polyphase_field_to_csv(const PolyphaseField& field);

/// Per-trial error table: trial, relative_error.
std::string trial_errors_to_csv(const std::vector<double>& errors);

} // namespace groupfb
