#pragma once

#include <string>

#include <json.hpp>

#include "densitylab/constructions.hpp"
#include "densitylab/density.hpp"
#include "densitylab/measures.hpp"
#include "densitylab/polya.hpp"

namespace densitylab {

using json = nlohmann::ordered_json;

json density_estimate_doc(const DensityEstimate& est);
json polya_estimate_doc(const PolyaEstimate& pe);
json gap_density_doc(const GapDensity& g, std::int64_t horizon);
json envelopes_doc(double lda_inf, double uda_inf, const std::vector<double>& alpha_grid,
                   std::int64_t horizon);
json exact_density_doc(const SetExpr& expr);
json constructed_set_doc(const std::string& kind, const ConstructedSet& set);
json check_report_doc(const CheckReport& rep);

// MeasureSpec round-trips exactly: from_json(to_json(spec)) == spec and
// to_json(from_json(doc)) == doc for documents this writer produces.
json measure_spec_to_json(const MeasureSpec& spec);
MeasureSpec measure_spec_from_json(const json& doc);

json filter_to_json(const FilterSurrogate& f);
FilterSurrogate filter_from_json(const json& doc);

std::string density_set_csv(const DensitySetSample& sample);

}  // namespace densitylab
