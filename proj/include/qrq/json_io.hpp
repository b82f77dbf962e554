#pragma once

#include <json.hpp>

#include "qrq/fock_oracle.hpp"
#include "qrq/invariants.hpp"
#include "qrq/qrq_core.hpp"
#include "qrq/sweeps.hpp"

namespace qrq {

using ojson = nlohmann::ordered_json;

// Complex numbers serialize as [re, im]; matrices as row-major arrays of those.
ojson to_json(cplx z);
ojson to_json(const Mat4& m);
ojson to_json(const QrqParams& p);
ojson to_json(const CompParams& c);
ojson to_json(const LocalInvariants& inv);
ojson to_json(const WeylPoint& w);
ojson to_json(const ClassResult& c);
ojson to_json(const BogoliubovPair& b);
ojson to_json(const OutputDecomposition& d);
ojson to_json(const PhiSolution& s);
ojson to_json(const RegimeReport& r);
ojson to_json(const ComparisonReport& r);
ojson to_json(const LocusPoint& p);
ojson to_json(const Polyline& p);
ojson to_json(const TableRowReport& r);
ojson to_json(const AppendixCheck& c);
ojson to_json(const SensitivityRecord& s);

cplx complex_from_json(const nlohmann::json& j);
Mat4 matrix_from_json(const nlohmann::json& j);

// Finite doubles as numbers, non-finite as null.
ojson number_or_null(double v);

}  // namespace qrq
