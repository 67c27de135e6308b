#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DENSITYLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(DENSITYLAB_SCHEMA_DIR) + "/" + name);
  REQUIRE(in.good());
  json doc;
  in >> doc;
  return doc;
}

// Minimal JSON Schema checker covering the subset our schemas use:
// type, required, properties, items, enum, anyOf, $ref (sibling files),
// minimum/maximum/exclusive*, minItems, pattern (only the rational form).
bool validate(const json& doc, const json& schema, std::string& why);

bool check_type(const json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
  if (type == "number") return doc.is_number();
  if (type == "null") return doc.is_null();
  return false;
}

bool validate(const json& doc, const json& schema, std::string& why) {
  if (schema.contains("$ref")) {
    static std::map<std::string, json> cache;
    const std::string ref = schema.at("$ref").get<std::string>();
    if (!cache.count(ref)) cache[ref] = load_schema(ref);
    return validate(doc, cache[ref], why);
  }
  if (schema.contains("anyOf")) {
    for (const auto& option : schema.at("anyOf")) {
      std::string ignored;
      if (validate(doc, option, ignored)) return true;
    }
    why = "no anyOf branch matched";
    return false;
  }
  if (schema.contains("type") && !check_type(doc, schema.at("type").get<std::string>())) {
    why = "wrong type, expected " + schema.at("type").get<std::string>();
    return false;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& v : schema.at("enum")) hit = hit || v == doc;
    if (!hit) {
      why = "value not in enum";
      return false;
    }
  }
  if (doc.is_number()) {
    const double x = doc.get<double>();
    if (schema.contains("minimum") && x < schema.at("minimum").get<double>()) {
      why = "below minimum";
      return false;
    }
    if (schema.contains("maximum") && x > schema.at("maximum").get<double>()) {
      why = "above maximum";
      return false;
    }
    if (schema.contains("exclusiveMinimum") && x <= schema.at("exclusiveMinimum").get<double>()) {
      why = "at or below exclusiveMinimum";
      return false;
    }
    if (schema.contains("exclusiveMaximum") && x >= schema.at("exclusiveMaximum").get<double>()) {
      why = "at or above exclusiveMaximum";
      return false;
    }
  }
  if (doc.is_string() && schema.contains("pattern")) {
    // only the rational pattern appears in our schemas
    const std::string s = doc.get<std::string>();
    std::size_t i = 0;
    if (i < s.size() && s[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    bool ok = digits > 0;
    if (ok && i < s.size()) {
      ok = s[i] == '/';
      ++i;
      digits = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
      ok = ok && digits > 0 && i == s.size();
    }
    if (!ok) {
      why = "pattern mismatch";
      return false;
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>())) {
          why = "missing required key " + key.get<std::string>();
          return false;
        }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema.at("properties").items()) {
        if (!doc.contains(key)) continue;
        if (!validate(doc.at(key), sub, why)) {
          why = key + ": " + why;
          return false;
        }
      }
    }
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") &&
        doc.size() < schema.at("minItems").get<std::size_t>()) {
      why = "too few items";
      return false;
    }
    if (schema.contains("items")) {
      for (const auto& item : doc)
        if (!validate(item, schema.at("items"), why)) {
          why = "item: " + why;
          return false;
        }
    }
  }
  return true;
}

void check_against_schema(const std::string& body, const std::string& schema_file) {
  std::string why;
  const bool ok = validate(json::parse(body), load_schema(schema_file), why);
  INFO(schema_file, ": ", why);
  CHECK(ok);
}

}  // namespace

TEST_CASE("density command emits a valid estimate document") {
  const auto r = run_cli("density \"ap(0,2)\" --horizon 65536");
  REQUIRE(r.exit_code == 0);
  check_against_schema(r.out, "density_estimate.schema.json");
  const json doc = json::parse(r.out);
  CHECK(doc.at("exists").get<bool>());
  CHECK(doc.at("value").get<double>() == doctest::Approx(0.5).epsilon(0.005));
  CHECK(doc.at("exact").get<std::string>() == "1/2");
}

TEST_CASE("alpha-density and exact commands") {
  const auto r = run_cli("alpha-density \"blocks(2,2,on=[0])\" --alpha 1 --horizon 262144");
  REQUIRE(r.exit_code == 0);
  check_against_schema(r.out, "density_estimate.schema.json");
  const json doc = json::parse(r.out);
  CHECK(doc.at("liminf").get<double>() == doctest::Approx(0.2).epsilon(0.02));
  CHECK(doc.at("limsup").get<double>() == doctest::Approx(0.8).epsilon(0.02));
  CHECK_FALSE(doc.at("exists").get<bool>());

  const auto ex = run_cli("exact \"diff(ap(0,2),finite{2,4})\"");
  REQUIRE(ex.exit_code == 0);
  check_against_schema(ex.out, "exact.schema.json");
  CHECK(json::parse(ex.out).at("exact").get<std::string>() == "1/2");

  const auto none = run_cli("exact \"blocks(2,2,on=[0])\"");
  REQUIRE(none.exit_code == 0);
  CHECK(json::parse(none.out).at("exact").is_null());
}

TEST_CASE("polya, gap, envelopes documents") {
  const auto p = run_cli("polya \"blocks(2,2,on=[0])\" --horizon 1048576");
  REQUIRE(p.exit_code == 0);
  check_against_schema(p.out, "polya_estimate.schema.json");
  const json pd = json::parse(p.out);
  CHECK(pd.at("lld").get<double>() <= 0.02);
  CHECK(pd.at("uud").get<double>() >= 0.98);

  const auto g = run_cli("gap \"blocks(2,2,on=[0])\" --horizon 1048576");
  REQUIRE(g.exit_code == 0);
  check_against_schema(g.out, "gap.schema.json");
  CHECK(json::parse(g.out).at("lambda").get<double>() == doctest::Approx(2.0).epsilon(1e-3));

  const auto e = run_cli("envelopes \"blocks(2,2,on=[0])\" --alpha-grid 0,1,2,8 --horizon 262144");
  REQUIRE(e.exit_code == 0);
  check_against_schema(e.out, "envelopes.schema.json");
  CHECK(json::parse(e.out).at("lda_inf_est").get<double>() ==
        doctest::Approx(1.0 / 513).epsilon(1e-6));
}

TEST_CASE("witness and measure round-trip through the wire format") {
  const auto w = run_cli("witness \"blocks(2,2,on=[0])\" --target 0.5 --horizon 1048576");
  REQUIRE(w.exit_code == 0);
  check_against_schema(w.out, "witness.schema.json");
  const json wd = json::parse(w.out);
  CHECK(wd.at("achieved").get<double>() == doctest::Approx(0.5).epsilon(0.02));

  // feed the emitted spec back through the measure command
  std::ofstream spec_file("/tmp/densitylab_spec.json");
  spec_file << wd.at("spec").dump();
  spec_file.close();
  const auto m = run_cli(
      "measure \"blocks(2,2,on=[0])\" --spec /tmp/densitylab_spec.json --horizon 1048576");
  REQUIRE(m.exit_code == 0);
  check_against_schema(m.out, "measure_value.schema.json");
  CHECK(json::parse(m.out).at("value").get<double>() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("density-set CSV and JSON") {
  const auto c = run_cli("density-set \"blocks(2,2,on=[0])\" --count 5 --seed 3 --horizon 262144");
  REQUIRE(c.exit_code == 0);
  CHECK(c.out.substr(0, 6) == "ld,ud\n");
  int lines = 0;
  for (char ch : c.out) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 6);

  const auto j = run_cli(
      "density-set \"blocks(2,2,on=[0])\" --count 5 --seed 3 --horizon 262144 --format json");
  REQUIRE(j.exit_code == 0);
  check_against_schema(j.out, "density_set.schema.json");
  CHECK(json::parse(j.out).at("points").size() == 5);
}

TEST_CASE("construct commands") {
  const auto c = run_cli("construct counterexample");
  REQUIRE(c.exit_code == 0);
  check_against_schema(c.out, "construct.schema.json");
  CHECK(json::parse(c.out).at("expr").get<std::string>() == "blocks(2,2,on=[0])");

  const auto i = run_cli("construct intermediate \"ap(0,3)\" \"ap(0,2)\" --horizon 100000");
  REQUIRE(i.exit_code == 0);
  check_against_schema(i.out, "construct.schema.json");
  const json doc = json::parse(i.out);
  CHECK(doc.at("density_at_horizon").get<double>() == doctest::Approx(1.0 / 3).epsilon(0.02));
  // the induction admits 4 (first B' member with A'(4) = 1) before C's first element 6
  CHECK(doc.at("intervals").get<std::string>().substr(0, 4) == "4,6,");
}

TEST_CASE("exit codes distinguish error classes") {
  CHECK(run_cli("density \"ap(5,3)\"").exit_code == 2);           // parse
  CHECK(run_cli("density \"frob(1)\"").exit_code == 2);           // parse
  CHECK(run_cli("bogus-subcommand").exit_code == 2);              // CLI parse
  CHECK(run_cli("density \"nat\" --bogus-flag 3").exit_code == 2);
  CHECK(run_cli("density \"nat\" --horizon 128").exit_code == 3);  // precondition
  CHECK(run_cli("gap \"finite{4,5}\" --horizon 262144").exit_code == 3);
  CHECK(run_cli("witness \"blocks(2,2,on=[0])\" --target 1.5 --horizon 1048576").exit_code == 3);
  CHECK(run_cli("alpha-density \"nat\" --alpha 99 --horizon 65536").exit_code == 3);
  // a filter that pins no cluster point
  std::ofstream bad("/tmp/densitylab_bad_spec.json");
  bad << R"({"atoms":[{"w":1.0,"kind":"alpha","param":1.0,"filter":{"kind":"explicit",)"
      << R"("indices":[4,8,16,32,64,128,256,512,1024,2048,4096,8192]}}]})";
  bad.close();
  CHECK(run_cli("measure \"blocks(2,2,on=[0])\" --spec /tmp/densitylab_bad_spec.json "
                "--horizon 1048576")
            .exit_code == 4);  // non-convergent
}

TEST_CASE("identical command and seed give byte-identical output") {
  const std::string cmd =
      "density-set \"blocks(2,2,on=[0])\" --count 8 --seed 42 --horizon 262144";
  const auto a = run_cli(cmd);
  const auto b = run_cli(cmd);
  CHECK(a.out == b.out);

  const auto c = run_cli("polya \"blocks(2,2,on=[0])\" --horizon 1048576");
  const auto d = run_cli("polya \"blocks(2,2,on=[0])\" --horizon 1048576");
  CHECK(c.out == d.out);
}

TEST_CASE("thread cap does not change results") {
  const std::string cmd = "density-set \"ap(0,2)\" --count 6 --seed 9 --horizon 262144";
  const auto single = run_cli("density-set \"ap(0,2)\" --count 6 --seed 9 --horizon 262144");
  RunResult multi;
  {
    const std::string env_cmd = std::string("DENSITYLAB_THREADS=1 ") +
                                DENSITYLAB_CLI_PATH + " " + cmd + " 2>/dev/null";
    std::array<char, 4096> buf{};
    FILE* pipe = popen(env_cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
      multi.out.append(buf.data(), got);
    multi.exit_code = WEXITSTATUS(pclose(pipe));
  }
  CHECK(single.out == multi.out);
}

TEST_CASE("--out writes the document to a file") {
  const auto r = run_cli("exact \"ap(0,3)\" --out /tmp/densitylab_out.json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in("/tmp/densitylab_out.json");
  json doc;
  in >> doc;
  CHECK(doc.at("exact").get<std::string>() == "1/3");
}
