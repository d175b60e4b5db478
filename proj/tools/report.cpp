#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <variant>

namespace kmsctl {

using namespace kmsphase;

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void emit(const Json& j, std::string& out, int depth) {
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                indent(out, depth + 1);
                out += Json(it.key()).dump();
                out += ": ";
                emit(it.value(), out, depth + 1);
            }
            out += "\n";
            indent(out, depth);
            out += "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                indent(out, depth + 1);
                emit(j[i], out, depth + 1);
            }
            out += "\n";
            indent(out, depth);
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) {
                out += Json(number(x)).dump();
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

std::string type_name(StateType t) {
    switch (t) {
        case StateType::Finite: return "finite";
        case StateType::Infinite: return "infinite";
        default: return "mixed";
    }
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json("divergent"); }

}  // namespace

std::string dump(const Json& j) {
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json vector(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

Json matrix(const Eigen::MatrixXd& M) {
    Json a = Json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(vector(M.row(r).transpose()));
    return a;
}

std::string bit_string(const BitVector& bits) {
    std::string s;
    for (bool b : bits) s += b ? '1' : '0';
    return s;
}

Json to_json(const PropertyReport& p) {
    Json j;
    j["irreducible"] = p.irreducible;
    j["no_zero_column"] = p.no_zero_column;
    j["finite_target_set"] = p.finite_target_set ? Json(*p.finite_target_set) : Json(nullptr);
    j["energy_gap"] = number(p.energy_gap);
    j["ta_equals_oa"] = p.ta_equals_oa;
    return j;
}

Json to_json(const ColumnSpace& space) {
    Json j;
    Json points = Json::array();
    for (const auto& p : space.points) points.push_back(bit_string(p));
    j["points"] = points;
    j["column_of"] = space.column_of;
    j["d"] = space.d();
    j["contains_zero"] = space.contains_zero;
    return j;
}

Json to_json(const PartitionReport& r) {
    Json j;
    j["beta"] = number(r.beta);
    j["spectral_radius"] = number(r.spectral_radius);
    j["margin"] = number(r.margin);
    j["near_critical"] = r.near_critical;
    j["reciprocal_condition"] = number(r.reciprocal_condition);
    j["convergent"] = r.convergent();
    j["z_total"] = optional_number(r.z_total);
    j["z_y"] = r.z_y ? vector(*r.z_y) : Json("divergent");
    j["z_xy"] = r.z_xy ? matrix(*r.z_xy) : Json("divergent");
    return j;
}

Json to_json(const CriticalReport& r) {
    Json j;
    j["beta_c"] = number(r.beta_c);
    j["bracket_width"] = number(r.bracket_width);
    j["interval"] = r.interval_open_at_left ? "(beta_c, inf]" : "[beta_c, inf]";
    j["temperatures_coincide"] = r.coincide;
    j["permutation_like"] = r.permutation_like;
    j["radius_at_critical"] = number(r.radius_at_critical);
    j["perron_vector"] = r.perron_at_critical ? vector(*r.perron_at_critical) : Json(nullptr);
    return j;
}

Json to_json(const SystemModel& model, const QState& s) {
    Json j;
    j["beta"] = number(s.beta);
    j["type"] = type_name(s.type);
    j["finite_fraction"] = number(s.finite_fraction);
    Json atoms;
    const auto& space = model.columns();
    for (std::size_t c = 0; c < space.d(); ++c) atoms[bit_string(space.points[c])] = number(s.atom_masses[static_cast<Eigen::Index>(c)]);
    j["atom_masses"] = atoms;
    j["q_values"] = vector(s.q_values);
    j["p_values"] = vector(s.p_values(model));
    return j;
}

Json to_json(const SystemModel& model, const PhaseRegime& r) {
    Json j;
    j["beta"] = number(r.beta);
    j["regime"] = std::string(r.name());
    j["critical"] = to_json(r.critical);
    std::visit(
        [&](const auto& reg) {
            using T = std::decay_t<decltype(reg)>;
            if constexpr (std::is_same_v<T, CriticalRegime>) {
                j["state"] = to_json(model, reg.state);
                j["fixed_point"] = vector(reg.fixed_point);
            } else if constexpr (std::is_same_v<T, AboveRegime> || std::is_same_v<T, GroundRegime>) {
                Json states = Json::array();
                for (const auto& s : reg.extreme_states) states.push_back(to_json(model, s));
                j["extreme_states"] = states;
                j["simplex_dim"] = reg.simplex_dim;
            } else {
                j["extreme_states"] = Json::array();
            }
        },
        r.regime);
    return j;
}

Json to_json(const OaSimplex& s) {
    Json j;
    j["beta"] = number(s.beta);
    j["eigenspace_dimension"] = s.eigenspace_dimension;
    j["max_residual"] = number(s.max_residual);
    Json ext = Json::array();
    for (const auto& v : s.extreme_vectors) ext.push_back(vector(v));
    j["extreme_vectors"] = ext;
    j["empty"] = s.empty();
    return j;
}

Json to_json(const InvarianceVerdict& v) {
    Json j;
    j["subinvariant"] = v.subinvariant;
    j["invariant"] = v.invariant;
    j["atom_gaps"] = vector(v.atom_gaps);
    j["exhaustive"] = v.exhaustive;
    j["pairs_checked"] = v.pairs_checked;
    j["atomization_error"] = number(v.atomization_error);
    if (v.worst_violation) {
        j["worst_violation"] = {{"X", v.worst_violation->X}, {"Y", v.worst_violation->Y},
                                {"gap", number(v.worst_violation->gap)}};
    } else {
        j["worst_violation"] = nullptr;
    }
    return j;
}

Json to_json(const SystemModel& model, const Decomposition& d) {
    Json j;
    j["defects"] = vector(d.defects);
    j["finite_fraction"] = number(d.finite_fraction);
    j["finite_part"] = d.finite_part ? to_json(model, *d.finite_part) : Json(nullptr);
    j["infinite_part"] = d.infinite_part ? to_json(model, *d.infinite_part) : Json(nullptr);
    j["fixed_point_residual"] = number(d.fixed_point_residual);
    j["normalization_residual"] = number(d.normalization_residual);
    j["reconstruction_residual"] = number(d.reconstruction_residual);
    return j;
}

Json to_json(const ZetaEnclosure& z) {
    return {{"lower", number(z.lower)}, {"upper", number(z.upper)}, {"value", number(z.value())}};
}

Json to_json(const StarPartition& p) {
    Json j;
    j["beta"] = number(p.beta);
    j["zeta"] = to_json(p.zeta);
    j["z0_displayed"] = optional_number(p.z0_displayed);
    j["z0_words"] = optional_number(p.z0_words);
    j["z_total"] = optional_number(p.z_total);
    j["convention"] = p.convention;
    return j;
}

Json to_json(const StarState& s) {
    Json j;
    j["beta"] = number(s.beta);
    j["t"] = number(s.t);
    j["atom_a"] = number(s.atom_a);
    j["atom_b"] = number(s.atom_b);
    j["q0"] = number(s.q0);
    j["qk"] = number(s.qk);
    j["z_gamma"] = number(s.z_gamma);
    j["normalization_residual"] = number(s.normalization_residual);
    return j;
}

}  // namespace kmsctl
