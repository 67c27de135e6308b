#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "densitylab/constructions.hpp"
#include "densitylab/counting.hpp"
#include "densitylab/density.hpp"
#include "densitylab/json_io.hpp"
#include "densitylab/measures.hpp"
#include "densitylab/parser.hpp"
#include "densitylab/polya.hpp"
#include "densitylab/verify.hpp"

namespace {

using densitylab::json;

constexpr std::int64_t kDefaultHorizon = std::int64_t(1) << 22;
constexpr std::int64_t kDefaultConstructHorizon = 1'000'000;

struct OutputSink {
  std::string path;  // empty = stdout

  void write(const std::string& body) const {
    if (path.empty()) {
      std::cout << body;
      if (body.empty() || body.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw densitylab::PreconditionFailed("cannot open output file: " + path);
    out << body;
    if (body.empty() || body.back() != '\n') out << '\n';
  }

  void write(const json& doc) const { write(doc.dump(2)); }
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, next - pos)));
    } catch (...) {
      throw densitylab::DomainError(std::string("bad value in ") + what + " list");
    }
    pos = next + 1;
  }
  if (out.empty()) throw densitylab::DomainError(std::string(what) + " list is empty");
  return out;
}

json spec_json_from_option(const std::string& spec_arg) {
  if (!spec_arg.empty() && spec_arg.front() == '{') return json::parse(spec_arg);
  std::ifstream in(spec_arg);
  if (!in) throw densitylab::PreconditionFailed("cannot read spec file: " + spec_arg);
  json doc;
  in >> doc;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densitylab: densities of integer sets and density measures"};
  app.require_subcommand(1);

  std::string expr_text, expr_text_b;
  std::string out_path;
  std::string format;  // default: json everywhere, csv for density-set
  std::string spec_arg;
  std::string construct_kind;
  std::string theta_list, alpha_grid;
  std::int64_t horizon = kDefaultHorizon;
  double alpha = 0.0;
  double target = 0.5;
  double tolerance = 1e-2;
  std::uint64_t seed = 1;
  int subset_count = 50;

  auto add_common = [&](CLI::App* cmd, bool with_expr = true) {
    if (with_expr) cmd->add_option("expr", expr_text, "set expression")->required();
    cmd->add_option("--horizon", horizon, "evaluation horizon");
    cmd->add_option("--tolerance", tolerance, "convergence tolerance");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--format", format, "output format: json|csv");
    cmd->add_option("--out", out_path, "write the document to a file");
  };

  auto* c_density = app.add_subcommand("density", "asymptotic density estimate");
  add_common(c_density);

  auto* c_alpha = app.add_subcommand("alpha-density", "alpha-density estimate");
  add_common(c_alpha);
  c_alpha->add_option("--alpha", alpha, "exponent alpha in [-1, 40]")->required();

  auto* c_exact = app.add_subcommand("exact", "exact density on the decidable fragment");
  add_common(c_exact);

  auto* c_polya = app.add_subcommand("polya", "Polya minimal/maximal density bounds");
  add_common(c_polya);
  c_polya->add_option("--theta-list", theta_list, "comma-separated thetas in (0,1)");

  auto* c_gap = app.add_subcommand("gap", "gap density lambda(A)");
  add_common(c_gap);

  auto* c_env = app.add_subcommand("envelopes", "alpha-density envelopes");
  add_common(c_env);
  c_env->add_option("--alpha-grid", alpha_grid, "comma-separated alpha grid");

  auto* c_measure = app.add_subcommand("measure", "evaluate a measure spec on a set");
  add_common(c_measure);
  c_measure->add_option("--spec", spec_arg, "measure spec: JSON file path or inline JSON")
      ->required();

  auto* c_witness = app.add_subcommand("witness", "measure spec attaining a target value");
  add_common(c_witness);
  c_witness->add_option("--target", target, "target measure value")->required();

  auto* c_construct = app.add_subcommand("construct", "materialize a constructed subset");
  c_construct
      ->add_option("kind", construct_kind,
                   "intermediate | matching | superset | counterexample")
      ->required();
  c_construct->add_option("exprA", expr_text, "first set expression");
  c_construct->add_option("exprB", expr_text_b, "second set expression");
  auto* construct_horizon = c_construct->add_option("--horizon", horizon,
                                                    "materialization horizon");
  c_construct->add_option("--out", out_path, "write the document to a file");
  c_construct->add_option("--format", format, "output format: json|csv");

  auto* c_dset = app.add_subcommand("density-set", "sample the density set of subsets");
  add_common(c_dset);
  c_dset->add_option("--count", subset_count, "number of sampled subsets");

  auto* c_verify = app.add_subcommand("verify", "run the full verification suite");
  c_verify->add_option("--seed", seed, "random seed");
  c_verify->add_option("--out", out_path, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    OutputSink sink{out_path};
    if (format.empty()) format = *c_dset ? "csv" : "json";
    const bool csv = format == "csv";
    if (format != "json" && format != "csv")
      throw densitylab::DomainError("unknown format: " + format);

    if (*c_density || *c_alpha) {
      if (csv) throw densitylab::DomainError("density output is JSON only");
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      if (*c_density) alpha = 0.0;
      const auto est = densitylab::estimate_alpha_density(expr, alpha, horizon);
      sink.write(densitylab::density_estimate_doc(est));
    } else if (*c_exact) {
      if (csv) throw densitylab::DomainError("exact output is JSON only");
      sink.write(densitylab::exact_density_doc(densitylab::parse_set_expr(expr_text)));
    } else if (*c_polya) {
      if (csv) throw densitylab::DomainError("polya output is JSON only");
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      const std::vector<double> thetas = theta_list.empty()
                                             ? densitylab::default_theta_grid()
                                             : parse_double_list(theta_list, "theta");
      sink.write(densitylab::polya_estimate_doc(densitylab::polya_bounds(expr, thetas, horizon)));
    } else if (*c_gap) {
      if (csv) throw densitylab::DomainError("gap output is JSON only");
      const auto g = densitylab::gap_density(densitylab::parse_set_expr(expr_text), horizon);
      sink.write(densitylab::gap_density_doc(g, horizon));
    } else if (*c_env) {
      if (csv) throw densitylab::DomainError("envelopes output is JSON only");
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      const std::vector<double> grid = alpha_grid.empty()
                                           ? std::vector<double>{-1, -0.5, 0, 1, 2, 4, 8}
                                           : parse_double_list(alpha_grid, "alpha");
      const auto [lo, hi] = densitylab::alpha_envelopes(expr, grid, horizon);
      sink.write(densitylab::envelopes_doc(lo, hi, grid, horizon));
    } else if (*c_measure) {
      if (csv) throw densitylab::DomainError("measure output is JSON only");
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      const auto spec = densitylab::measure_spec_from_json(spec_json_from_option(spec_arg));
      densitylab::FlimOptions flim_opts;
      flim_opts.tol = tolerance;
      const double value = densitylab::evaluate_measure(spec, expr, horizon, flim_opts);
      json doc;
      doc["value"] = value;
      doc["horizon"] = horizon;
      doc["spec"] = densitylab::measure_spec_to_json(spec);
      sink.write(doc);
    } else if (*c_witness) {
      if (csv) throw densitylab::DomainError("witness output is JSON only");
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      const auto spec = densitylab::range_witness(expr, target, horizon, tolerance * 2);
      const double achieved = densitylab::evaluate_measure(spec, expr, horizon);
      json doc;
      doc["target"] = target;
      doc["achieved"] = achieved;
      doc["horizon"] = horizon;
      doc["spec"] = densitylab::measure_spec_to_json(spec);
      sink.write(doc);
    } else if (*c_construct) {
      if (construct_kind == "counterexample") {
        if (csv) {
          sink.write(densitylab::counterexample_set().text());
        } else {
          json doc;
          doc["kind"] = "counterexample";
          doc["expr"] = densitylab::counterexample_set().text();
          sink.write(doc);
        }
      } else {
        if (expr_text.empty() || expr_text_b.empty())
          throw densitylab::DomainError("construct needs two set expressions");
        if (construct_horizon->count() == 0) horizon = kDefaultConstructHorizon;
        const densitylab::SetExpr a = densitylab::parse_set_expr(expr_text);
        const densitylab::SetExpr b = densitylab::parse_set_expr(expr_text_b);
        densitylab::ConstructionResult res = [&] {
          if (construct_kind == "intermediate")
            return densitylab::intermediate_subset(a, b, horizon);
          if (construct_kind == "matching")
            return densitylab::difference_matching_subset(a, b, horizon);
          if (construct_kind == "superset") return densitylab::corollary_superset(a, b, horizon);
          throw densitylab::DomainError("unknown construct kind: " + construct_kind);
        }();
        if (csv) {
          sink.write(res.set.to_intervals());
        } else {
          sink.write(densitylab::constructed_set_doc(construct_kind, res.set));
        }
      }
    } else if (*c_dset) {
      const densitylab::SetExpr expr = densitylab::parse_set_expr(expr_text);
      const auto sample = densitylab::density_set_sample(expr, subset_count, horizon, seed);
      if (format == "json") {
        json pts = json::array();
        for (const auto& p : sample.points) {
          json row;
          row["ld"] = p.ld;
          row["ud"] = p.ud;
          row["keep_probability"] = p.keep_probability;
          pts.push_back(std::move(row));
        }
        json doc;
        doc["points"] = std::move(pts);
        if (std::isinf(sample.lambda_est))
          doc["lambda_est"] = "infinite";
        else
          doc["lambda_est"] = sample.lambda_est;
        doc["line_ok"] = sample.line_ok;
        sink.write(doc);
      } else {
        sink.write(densitylab::density_set_csv(sample));
      }
    } else if (*c_verify) {
      densitylab::VerifyOptions vopts;
      vopts.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const auto results = densitylab::run_full_verification(vopts);
      std::string body;
      bool all_pass = true;
      for (const auto& r : results) {
        body += (r.pass ? "PASS " : "FAIL ") + r.name + " - " + r.detail + "\n";
        std::cerr << r.name << ": " << r.seconds << " s\n";
        all_pass = all_pass && r.pass;
      }
      body += all_pass ? "verification: all checks passed\n" : "verification: FAILURES above\n";
      sink.write(body);
      std::cerr << "total: "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                << " s\n";
      return all_pass ? 0 : 5;
    }
  } catch (const densitylab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
