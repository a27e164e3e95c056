#pragma once

#include "quantk/bounds.hpp"
#include "quantk/metric.hpp"
#include "quantk/nerve.hpp"
#include "quantk/operators.hpp"
#include "quantk/params.hpp"
#include "quantk/quasi.hpp"

#include <json.hpp>

#include <string>

namespace quantk {

using Json = nlohmann::json;

Json space_to_json(const FiniteMetricSpace& space, const std::string& name = "space");
SpacePtr space_from_json(const Json& j);

Json cover_to_json(const FiniteMetricSpace& space, const OpenCover& cover);
OpenCover cover_from_json(const FiniteMetricSpace& space, const Json& j);

Json nerve_to_json(const NerveComplex& nc);

Json operator_to_json(const FilteredOperator& op, const std::string& space_name = "space");
FilteredOperator operator_from_json(SpacePtr space, const Json& j);

Json certificate_to_json(const Certificate& c, const ParameterTuple& p);

ParameterTuple params_from_json(const Json& j);
Json params_to_json(const ParameterTuple& p);

BoundConstants constants_from_json(const Json& j);
Json constants_to_json(const BoundConstants& c);

// "inf" sentinel for the Lebesgue number of a cover containing the space.
Json finite_or_inf(double v);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// Every CLI artifact carries the same envelope.
Json report_envelope(const std::string& kind);

}  // namespace quantk
