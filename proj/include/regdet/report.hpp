#pragma once

#include "json.hpp"
#include <string>

#include "regdet/anomaly.hpp"
#include "regdet/gff.hpp"
#include "regdet/green.hpp"
#include "regdet/heat.hpp"
#include "regdet/spectra.hpp"
#include "regdet/zeta.hpp"

namespace regdet {

using Json = nlohmann::ordered_json;

Json to_json(const SurfaceModel& model);
Json to_json(const HeatCoeffs& coeffs);
Json to_json(const HeatTraceResult& result);
Json to_json(const HeatIntegral& result);
Json to_json(const ZetaResult& result);
Json to_json(const LaurentFit& fit);
Json to_json(const Det2Result& result);
Json to_json(const FinitePart& fp);
Json to_json(const AnomalyReport& report);
Json to_json(const MasslessCheck& check);
Json to_json(const MasslessReport& report);
Json to_json(const MCEstimate& estimate);
Json to_json(const MeasureIdentityResult& result);

/// Serialized document. Doubles are written as the shortest decimal string
/// that reads back to the same value (at most 17 significant digits).
std::string dump_json(const Json& doc);

/// Flat `path,value` projection of every scalar leaf under "results", with
/// numbers printed to 17 significant digits.
std::string to_csv(const Json& doc);

}  // namespace regdet
