#include "groupfb/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace groupfb {

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw ValidationError("cannot serialize a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_value(const json& value, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (value.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(value.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(value.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += format_double(value.get<double>());
            break;
        case json::value_t::string:
            out += json(value.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                break;
            }
            // Pair-of-numbers arrays (complex values) stay on one line.
            bool scalars_only = true;
            for (const auto& item : value) {
                if (item.is_structured()) {
                    scalars_only = false;
                    break;
                }
            }
            if (scalars_only) {
                out += "[";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    if (i) out += ", ";
                    write_value(value[i], out, depth);
                }
                out += "]";
            } else {
                out += "[\n";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    out += pad_in;
                    write_value(value[i], out, depth + 1);
                    if (i + 1 < value.size()) out += ",";
                    out += "\n";
                }
                out += pad + "]";
            }
            break;
        }
        case json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, item] : value.items()) {
                out += pad_in + json(key).dump() + ": ";
                write_value(item, out, depth + 1);
                if (++i < value.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            break;
        }
        default:
            throw ValidationError("unsupported JSON value type");
    }
}

std::size_t to_index(const json& j, std::size_t bound, const std::string& context) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw ValidationError(context + ": expected an integer index");
    const auto v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::size_t>(v) >= bound)
        throw ValidationError(context + ": index " + std::to_string(v) + " out of range");
    return static_cast<std::size_t>(v);
}

IntMatrix int_matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty())
        throw ValidationError(context + ": expected a nonempty array of rows");
    IntMatrix m;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError(context + ": expected an array of rows");
        std::vector<std::int64_t> r;
        for (const auto& v : row) {
            if (!v.is_number_integer() && !v.is_number_unsigned())
                throw ValidationError(context + ": matrix entries must be integers");
            r.push_back(v.get<std::int64_t>());
        }
        m.push_back(std::move(r));
    }
    return m;
}

} // namespace

std::string write_json(const json& value) {
    std::string out;
    write_value(value, out, 0);
    out += "\n";
    return out;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
    return buf;
}

void expect_keys(const json& object, const std::vector<std::string>& allowed,
                 const std::string& context) {
    if (!object.is_object()) throw ValidationError(context + ": expected a JSON object");
    for (const auto& [key, value] : object.items()) {
        (void)value;
        bool known = false;
        for (const auto& a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) throw ValidationError(context + ": unknown field \"" + key + "\"");
    }
}

json complex_to_json(const cdouble& z) {
    return json::array({z.real(), z.imag()});
}

cdouble complex_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(context + ": complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cvector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

CVector cvector_from_json(const json& j, const std::string& context) {
    if (!j.is_array()) throw ValidationError(context + ": expected an array of [re, im] pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], context);
    return v;
}

GroupPtr group_from_json(const json& j) {
    expect_keys(j, {"moduli", "H_table", "action"}, "group spec");
    if (!j.contains("moduli") || !j.contains("H_table") || !j.contains("action"))
        throw ValidationError("group spec needs \"moduli\", \"H_table\" and \"action\"");

    std::vector<std::int64_t> moduli;
    for (const auto& v : j.at("moduli")) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ValidationError("group spec: moduli must be integers");
        moduli.push_back(v.get<std::int64_t>());
    }
    auto n_group = std::make_shared<AbelianGroup>(std::move(moduli));

    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : j.at("H_table")) {
        std::vector<std::size_t> r;
        for (const auto& v : row) r.push_back(to_index(v, j.at("H_table").size(), "H_table"));
        table.push_back(std::move(r));
    }
    FiniteGroup h_group(std::move(table));

    const auto& action_json = j.at("action");
    if (!action_json.is_object())
        throw ValidationError("group spec: \"action\" must map h indices to automorphisms");
    std::vector<Automorphism> action(h_group.order(), Automorphism::identity(n_group));
    std::vector<bool> assigned(h_group.order(), false);
    for (const auto& [key, value] : action_json.items()) {
        std::size_t h = 0;
        try {
            h = static_cast<std::size_t>(std::stoul(key));
        } catch (const std::exception&) {
            throw ValidationError("group spec: action key \"" + key + "\" is not an index");
        }
        if (h >= h_group.order())
            throw ValidationError("group spec: action key " + key + " out of range");
        if (value.is_array() && !value.empty() && value[0].is_array()) {
            action[h] = Automorphism::from_matrix(n_group,
                                                  int_matrix_from_json(value, "action matrix"));
        } else if (value.is_array()) {
            std::vector<std::size_t> perm;
            for (const auto& v : value)
                perm.push_back(to_index(v, n_group->order(), "action permutation"));
            action[h] = Automorphism::from_permutation(n_group, std::move(perm));
        } else {
            throw ValidationError("group spec: action values are matrices or permutations");
        }
        assigned[h] = true;
    }
    for (std::size_t h = 0; h < h_group.order(); ++h) {
        if (!assigned[h])
            throw ValidationError("group spec: missing action for h index " + std::to_string(h));
    }
    return std::make_shared<SemidirectGroup>(n_group, std::move(h_group), std::move(action));
}

json group_to_json(const SemidirectGroup& group) {
    json j;
    j["moduli"] = group.n_group().moduli();
    json table = json::array();
    for (const auto& row : group.h_group().table()) table.push_back(row);
    j["H_table"] = std::move(table);
    json action;
    for (std::size_t h = 0; h < group.h_group().order(); ++h) {
        action[std::to_string(h)] = group.action(h).permutation();
    }
    j["action"] = std::move(action);
    return j;
}

GSignal gsignal_from_json(const json& j, const GroupPtr& group, const std::string& context) {
    if (!j.is_array() || j.size() != group->order())
        throw ValidationError(context + ": expected " + std::to_string(group->order()) +
                              " [re, im] pairs in n-major h-minor order");
    GSignal out = GSignal::zeros(group);
    for (std::size_t i = 0; i < j.size(); ++i) out.values[i] = complex_from_json(j[i], context);
    return out;
}

json gsignal_to_json(const GSignal& signal) {
    json out = json::array();
    for (const auto& v : signal.values) out.push_back(complex_to_json(v));
    return out;
}

std::vector<GSignal> bank_from_json(const json& j, const GroupPtr& group,
                                    const std::string& context) {
    if (!j.is_array() || j.empty())
        throw ValidationError(context + ": expected a nonempty array of filters");
    std::vector<GSignal> bank;
    bank.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        bank.push_back(gsignal_from_json(j[k], group, context + "[" + std::to_string(k) + "]"));
    return bank;
}

json bank_to_json(const std::vector<GSignal>& bank) {
    json out = json::array();
    for (const auto& f : bank) out.push_back(gsignal_to_json(f));
    return out;
}

CrystalSpec crystal_spec_from_json(const json& j) {
    expect_keys(j, {"d", "q", "M", "Gamma", "generator", "probes", "points"}, "crystal spec");
    if (!j.contains("d") || !j.contains("q") || !j.contains("M") || !j.contains("Gamma"))
        throw ValidationError("crystal spec needs \"d\", \"q\", \"M\" and \"Gamma\"");
    CrystalSpec spec;
    spec.dimension = j.at("d").get<std::size_t>();
    spec.grid_side = j.at("q").get<std::int64_t>();
    spec.lattice = int_matrix_from_json(j.at("M"), "crystal lattice");
    for (const auto& g : j.at("Gamma"))
        spec.point_group.push_back(int_matrix_from_json(g, "crystal point group"));
    return spec;
}

json crystal_spec_to_json(const CrystalSpec& spec) {
    json j;
    j["d"] = spec.dimension;
    j["q"] = spec.grid_side;
    j["M"] = spec.lattice;
    j["Gamma"] = spec.point_group;
    return j;
}

ProblemBundle sampling_problem_from_json(const json& j, std::uint64_t default_seed,
                                         double frame_tolerance) {
    expect_keys(j, {"rep", "generator", "mode", "probes", "points"}, "sampling problem");
    if (!j.contains("rep")) throw ValidationError("sampling problem needs a \"rep\"");
    const auto& rep_json = j.at("rep");
    expect_keys(rep_json, {"group", "matrices", "quasi_regular"}, "rep");

    std::optional<CrystalModel> crystal;
    std::optional<UnitaryRep> rep;
    if (rep_json.contains("quasi_regular")) {
        crystal = build_crystal_group(crystal_spec_from_json(rep_json.at("quasi_regular")));
        rep = crystal->rep;
    } else {
        if (!rep_json.contains("group") || !rep_json.contains("matrices"))
            throw ValidationError("explicit rep needs \"group\" and \"matrices\"");
        GroupPtr group = group_from_json(rep_json.at("group"));
        const auto& ms = rep_json.at("matrices");
        if (!ms.is_array() || ms.size() != group->order())
            throw ValidationError("rep needs one matrix per group element, n-major h-minor");
        std::vector<CMatrix> matrices;
        matrices.reserve(ms.size());
        for (const auto& mj : ms) {
            if (!mj.is_array() || mj.empty())
                throw ValidationError("rep matrix must be an array of rows");
            const auto rows = static_cast<Eigen::Index>(mj.size());
            CMatrix m(rows, rows);
            for (Eigen::Index r = 0; r < rows; ++r) {
                const auto& row = mj[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
                    throw ValidationError("rep matrix must be square");
                for (Eigen::Index c = 0; c < rows; ++c)
                    m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], "rep matrix");
            }
            matrices.push_back(std::move(m));
        }
        rep = UnitaryRep(group, std::move(matrices));
    }

    CVector generator;
    if (j.contains("generator") && j.at("generator").is_array()) {
        generator = cvector_from_json(j.at("generator"), "generator");
    } else if (crystal.has_value()) {
        std::uint64_t seed = default_seed;
        if (j.contains("generator")) {
            expect_keys(j.at("generator"), {"seed"}, "generator");
            if (j.at("generator").contains("seed"))
                seed = j.at("generator").at("seed").get<std::uint64_t>();
        }
        generator = default_generator(*crystal, seed);
    } else {
        throw ValidationError("explicit reps need an explicit \"generator\"");
    }

    const std::string mode = j.value("mode", std::string("average"));
    if (mode == "average") {
        if (!j.contains("probes"))
            throw ValidationError("average mode needs \"probes\"");
        std::vector<CVector> probes;
        for (const auto& p : j.at("probes")) probes.push_back(cvector_from_json(p, "probe"));
        return ProblemBundle{std::move(crystal),
                             SamplingProblem(std::move(*rep), std::move(generator),
                                             std::move(probes), frame_tolerance)};
    }
    if (mode == "pointwise") {
        if (!j.contains("points"))
            throw ValidationError("pointwise mode needs \"points\"");
        std::vector<std::size_t> points;
        for (const auto& p : j.at("points")) {
            if (p.is_array()) {
                if (!crystal.has_value())
                    throw ValidationError("coordinate points need a quasi_regular rep");
                std::vector<std::int64_t> coords;
                for (const auto& c : p) coords.push_back(c.get<std::int64_t>());
                points.push_back(crystal->grid_index(coords));
            } else {
                points.push_back(to_index(p, rep->dim(), "points"));
            }
        }
        return ProblemBundle{std::move(crystal),
                             SamplingProblem(std::move(*rep), std::move(generator),
                                             std::move(points), frame_tolerance)};
    }
    throw ValidationError("mode must be \"average\" or \"pointwise\"");
}

json spectral_bounds_to_json(const SpectralBounds& bounds) {
    json j;
    j["lower"] = bounds.lower;
    j["upper"] = bounds.upper;
    j["argmin_gamma"] = bounds.argmin_gamma;
    return j;
}

json riesz_bounds_to_json(const RieszBounds& bounds) {
    json j;
    j["lower"] = bounds.lower;
    j["upper"] = bounds.upper;
    return j;
}

json frame_report_to_json(const FrameReport& report) {
    json j;
    j["frame_bounds"] = spectral_bounds_to_json(report.bounds);
    j["bessel"] = report.bessel;
    j["frame"] = report.frame;
    if (report.tight.has_value()) {
        j["tight"] = json{{"constant", *report.tight}};
    } else {
        j["tight"] = nullptr;
    }
    if (report.has_pair) {
        json c;
        c["dual_frames"] = report.dual;
        c["biorthogonal"] = report.biorthogonal;
        c["riesz_dual"] = report.riesz_dual;
        c["orthonormal_basis"] = report.orthonormal_basis;
        j["classification"] = std::move(c);
    }
    return j;
}

json pr_report_to_json(const PrReport& report) {
    json j;
    j["pr"] = report.perfect;
    j["max_dev"] = report.max_deviation;
    j["worst_gamma"] = report.worst_gamma;
    j["worst_entry"] = json::array({report.worst_row, report.worst_col});
    j["tolerance"] = report.tolerance;
    return j;
}

json demo_report_to_json(const DemoReport& report) {
    json j;
    j["mode"] = report.mode == SampleMode::Average ? "average" : "pointwise";
    j["channels"] = report.channels;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["orbit_gram"] = riesz_bounds_to_json(report.gram);
    j["analysis_bounds"] = spectral_bounds_to_json(report.analysis_bounds);
    j["subspace_frame"] = riesz_bounds_to_json(report.subspace_frame);
    json errors;
    errors["max"] = report.max_relative_error;
    errors["mean"] = report.mean_relative_error;
    j["errors"] = std::move(errors);
    if (report.interpolation_deviation.has_value()) {
        j["interpolation_max_dev"] = *report.interpolation_deviation;
    }
    json vectors = json::array();
    for (const auto& c : report.reconstruction_vectors) vectors.push_back(cvector_to_json(c));
    j["reconstruction_vectors"] = std::move(vectors);
    return j;
}

std::string polyphase_field_to_csv(const PolyphaseField& field) {
    std::string out = "gamma,row,col,re,im\n";
    for (std::size_t gamma = 0; gamma < field.matrices.size(); ++gamma) {
        const CMatrix& m = field.matrices[gamma];
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                out += std::to_string(gamma) + "," + std::to_string(r) + "," +
                       std::to_string(c) + "," + format_double(m(r, c).real()) + "," +
                       format_double(m(r, c).imag()) + "\n";
            }
        }
    }
    return out;
}

std::string trial_errors_to_csv(const std::vector<double>& errors) {
    std::string out = "trial,relative_error\n";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out += std::to_string(i) + "," + format_double(errors[i]) + "\n";
    }
    return out;
}

} // namespace groupfb
