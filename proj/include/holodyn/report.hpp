// JSON views of every result type, used by the CLI reports.
#pragma once

#include <json.hpp>

#include "holodyn/bouquet.hpp"
#include "holodyn/fatou.hpp"
#include "holodyn/julia.hpp"
#include "holodyn/newton.hpp"
#include "holodyn/orbit.hpp"
#include "holodyn/periodic.hpp"

namespace holodyn::report {

using Json = nlohmann::ordered_json;

Json complex_json(Complex z);
Json box_json(const Box& b);
Json fate_json(const Fate& f);
Json orbit_json(const OrbitRecord& r, bool include_points = true);
Json preimage_json(const PreimageSet& s);
Json periodic_point_json(const PeriodicPoint& p);
Json periodic_search_json(const PeriodicSearch& s);
Json rate_check_json(const RateCheck& r);
Json fate_label_json(const FateLabel& l);
Json raster_sidecar_json(const RasterGrid& g, const Json& parameters);
Json newton_setup_json(const NewtonSetup& s);
Json smale_json(const SmaleReport& r);
Json flow_json(const FlowOutcome& f);
Json basin_json(const BasinReport& r);
Json bouquet_config_json(const BouquetConfig& c);
Json itinerary_json(const ItineraryResult& r);

/// Pretty JSON text with a trailing newline.
std::string dump(const Json& j);

}  // namespace holodyn::report
