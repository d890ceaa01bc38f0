#pragma once

// JSON layout for expressions, series and certificates (see docs/formats.md).

#include "dunham/diffpoly.h"
#include "dunham/wkb_series.h"

#include "json.hpp"

namespace dunham {

nlohmann::json to_json(const DiffExpr& e);
DiffExpr diffexpr_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WkbSeries& series);
WkbSeries series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OddTermCertificate& cert);

}  // namespace dunham
