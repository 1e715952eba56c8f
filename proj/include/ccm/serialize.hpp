// JSON serialization of the model types. Complex numbers are [re, im] pairs;
// matrices are nested row-major arrays. read(write(x)) agrees with x to
// 1e-15 relative (values are printed with 17 significant digits).
#pragma once

#include "json.hpp"  // vendored single-header nlohmann/json

#include "ccm/curves.hpp"
#include "ccm/model.hpp"

namespace ccm {

using json = nlohmann::json;

json to_json(const cplx& z);
cplx cplx_from_json(const json& j);

json to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const json& j);

json to_json(const Coupling& c);
Coupling coupling_from_json(const json& j);

json to_json(const SpectralPoint& p);
SpectralPoint spectral_point_from_json(const json& j);

json to_json(const SpinFraming& f);
SpinFraming spin_framing_from_json(const json& j);

json to_json(const QModelPoint& p);
QModelPoint qmodel_point_from_json(const json& j);

json to_json(const Quadruple& q);
Quadruple quadruple_from_json(const json& j);

json to_json(const CurvePolys& c);
CurvePolys curve_polys_from_json(const json& j);

// Serialize with deterministic formatting (sorted keys, fixed indent).
std::string dump(const json& j);

} // namespace ccm
