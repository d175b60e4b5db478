#pragma once

// JSON views of the library's reports. Output is deterministic: object keys
// are sorted, doubles are printed with 17 significant digits, and
// non-finite values become the strings "inf", "-inf" and "nan".

#include "kmsphase/classify.hpp"
#include "kmsphase/critical.hpp"
#include "kmsphase/invariance.hpp"
#include "kmsphase/measure.hpp"
#include "kmsphase/model.hpp"
#include "kmsphase/partition.hpp"
#include "kmsphase/star.hpp"
#include "kmsphase/states.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace kmsctl {

using Json = nlohmann::json;

std::string dump(const Json& j);

/// Double as JSON, with non-finite values spelled out.
Json number(double x);
Json vector(const Eigen::VectorXd& v);
Json matrix(const Eigen::MatrixXd& M);
std::string bit_string(const kmsphase::BitVector& bits);

Json to_json(const kmsphase::PropertyReport& p);
Json to_json(const kmsphase::ColumnSpace& space);
Json to_json(const kmsphase::PartitionReport& r);
Json to_json(const kmsphase::CriticalReport& r);
Json to_json(const kmsphase::SystemModel& model, const kmsphase::QState& s);
Json to_json(const kmsphase::SystemModel& model, const kmsphase::PhaseRegime& r);
Json to_json(const kmsphase::OaSimplex& s);
Json to_json(const kmsphase::InvarianceVerdict& v);
Json to_json(const kmsphase::SystemModel& model, const kmsphase::Decomposition& d);
Json to_json(const kmsphase::ZetaEnclosure& z);
Json to_json(const kmsphase::StarPartition& p);
Json to_json(const kmsphase::StarState& s);

}  // namespace kmsctl
