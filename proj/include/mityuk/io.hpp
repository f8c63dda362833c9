#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "mityuk/demos.hpp"

namespace mityuk {

/// Doubles are written with 17 significant digits; NaN becomes null.
nlohmann::json number(double x);
nlohmann::json point(Complex z);
std::string slit_text(const SlitSpec& slits);

nlohmann::json to_json(const MityukResult& r);
/// Metadata plus row-major values (null where masked) and mask labels.
nlohmann::json to_json(const ScalarField& f);
nlohmann::json to_json(const CriticalPoint& p);
nlohmann::json to_json(const CriticalReport& r);
nlohmann::json to_json(const MorseReport& r);
nlohmann::json to_json(const ProbeResult& r);
nlohmann::json to_json(const BoundReport& r);
/// Everything except the elapsed time, which goes under "metadata".
nlohmann::json to_json(const MixStudy& s, bool include_field = false);

/// Header `x,y,mask,R`; R is empty where masked.
void write_field_csv(std::ostream& os, const ScalarField& f);

}  // namespace mityuk
