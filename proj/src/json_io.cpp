#include "densitylab/json_io.hpp"

#include <cmath>

#include "densitylab/parser.hpp"

namespace densitylab {

json density_estimate_doc(const DensityEstimate& est) {
  json doc;
  doc["liminf"] = est.liminf_est;
  doc["limsup"] = est.limsup_est;
  doc["exists"] = est.exists;
  if (est.value) doc["value"] = *est.value;
  if (est.exact) doc["exact"] = est.exact->str();
  doc["alpha"] = est.alpha;
  doc["horizon"] = est.horizon;
  doc["checkpoints"] = est.checkpoint_count;
  return doc;
}

json polya_estimate_doc(const PolyaEstimate& pe) {
  json doc;
  doc["lld"] = pe.lld_est;
  doc["uud"] = pe.uud_est;
  doc["horizon"] = pe.horizon;
  json rows = json::array();
  for (const auto& row : pe.per_theta) {
    json r;
    r["theta"] = row.theta;
    r["liminf"] = row.liminf;
    r["limsup"] = row.limsup;
    rows.push_back(std::move(r));
  }
  doc["per_theta"] = std::move(rows);
  return doc;
}

json gap_density_doc(const GapDensity& g, std::int64_t horizon) {
  json doc;
  if (g.infinite)
    doc["lambda"] = "infinite";
  else
    doc["lambda"] = g.value;
  doc["horizon"] = horizon;
  return doc;
}

json envelopes_doc(double lda_inf, double uda_inf, const std::vector<double>& alpha_grid,
                   std::int64_t horizon) {
  json doc;
  doc["lda_inf_est"] = lda_inf;
  doc["uda_inf_est"] = uda_inf;
  doc["alpha_grid"] = alpha_grid;
  doc["horizon"] = horizon;
  return doc;
}

json exact_density_doc(const SetExpr& expr) {
  json doc;
  doc["expr"] = expr.text();
  const auto d = exact_density(expr);
  if (d) {
    doc["exact"] = d->str();
    doc["value"] = d->to_double();
  } else {
    doc["exact"] = nullptr;
  }
  return doc;
}

json constructed_set_doc(const std::string& kind, const ConstructedSet& set) {
  json doc;
  doc["kind"] = kind;
  doc["horizon"] = set.horizon();
  doc["count"] = set.count(set.horizon());
  doc["density_at_horizon"] =
      static_cast<double>(set.count(set.horizon())) / static_cast<double>(set.horizon());
  doc["provenance"] = set.provenance();
  doc["intervals"] = set.to_intervals();
  return doc;
}

json check_report_doc(const CheckReport& rep) {
  json doc;
  doc["title"] = rep.title;
  doc["pass"] = rep.pass;
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json r;
    r["label"] = row.label;
    r["observed"] = row.observed;
    r["bound"] = row.bound;
    r["ok"] = row.ok;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

json filter_to_json(const FilterSurrogate& f) {
  json doc;
  switch (f.kind()) {
    case FilterSurrogate::Kind::Explicit:
      doc["kind"] = "explicit";
      doc["indices"] = f.stored_indices();
      break;
    case FilterSurrogate::Kind::BlockBoundaries:
      doc["kind"] = "block_boundaries";
      doc["expr"] = f.expr().text();
      doc["phase"] = f.phase();
      doc["stride"] = f.stride();
      break;
    case FilterSurrogate::Kind::PolyaWindows:
      doc["kind"] = "polya_windows";
      doc["theta"] = f.theta();
      doc["indices"] = f.stored_indices();
      break;
  }
  return doc;
}

FilterSurrogate filter_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "explicit")
    return FilterSurrogate::explicit_indices(doc.at("indices").get<std::vector<std::int64_t>>());
  if (kind == "block_boundaries")
    return FilterSurrogate::block_boundaries(parse_set_expr(doc.at("expr").get<std::string>()),
                                             doc.at("phase").get<std::int64_t>(),
                                             doc.at("stride").get<std::int64_t>());
  if (kind == "polya_windows")
    return FilterSurrogate::polya_windows(doc.at("theta").get<double>(),
                                          doc.at("indices").get<std::vector<std::int64_t>>());
  throw DomainError("unknown filter kind: " + kind);
}

json measure_spec_to_json(const MeasureSpec& spec) {
  json atoms = json::array();
  for (const auto& a : spec.atoms) {
    json atom;
    atom["w"] = a.weight;
    atom["kind"] = a.kind == MeasureAtom::Kind::Alpha ? "alpha" : "theta";
    atom["param"] = a.param;
    atom["filter"] = filter_to_json(a.filter);
    atoms.push_back(std::move(atom));
  }
  json doc;
  doc["atoms"] = std::move(atoms);
  return doc;
}

MeasureSpec measure_spec_from_json(const json& doc) {
  MeasureSpec spec;
  for (const auto& atom : doc.at("atoms")) {
    MeasureAtom a;
    a.weight = atom.at("w").get<double>();
    const std::string kind = atom.at("kind").get<std::string>();
    if (kind == "alpha")
      a.kind = MeasureAtom::Kind::Alpha;
    else if (kind == "theta")
      a.kind = MeasureAtom::Kind::Theta;
    else
      throw DomainError("unknown atom kind: " + kind);
    a.param = atom.at("param").get<double>();
    a.filter = filter_from_json(atom.at("filter"));
    spec.atoms.push_back(std::move(a));
  }
  spec.validate();
  return spec;
}

std::string density_set_csv(const DensitySetSample& sample) {
  std::string out = "ld,ud\n";
  for (const auto& pt : sample.points) {
    json ld = pt.ld;  // reuse the JSON float writer for stable formatting
    json ud = pt.ud;
    out += ld.dump() + "," + ud.dump() + "\n";
  }
  return out;
}

}  // namespace densitylab
