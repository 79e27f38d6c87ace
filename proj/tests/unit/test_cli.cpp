#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fgdyn/document.hpp"
#include "fgdyn/fixtures.hpp"

using namespace fgdyn;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fgdyn");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cli_run(args, out, err);
  return Run{code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "fgdyn_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

std::string non_unital_law() {
  const auto ctx = PrecisionContext::make(3, 20, 6);
  const MultiSeries x = MultiSeries::variable(ctx, 2, 0);
  const MultiSeries y = MultiSeries::variable(ctx, 2, 1);
  return serialize(make_document(TupleSeries(std::vector<MultiSeries>{x + y + x * x}), DocumentKind::GroupLaw));
}

const std::vector<ErrorCode> kAllCodes{
    ErrorCode::InvalidArgument,     ErrorCode::PrecisionExhausted, ErrorCode::DivisionByZero,
    ErrorCode::MixedContext,        ErrorCode::ImpreciseValuation, ErrorCode::BadModulus,
    ErrorCode::NonzeroConstantTerm, ErrorCode::NotInvertible,      ErrorCode::DivergentPoint,
    ErrorCode::AxiomViolation,      ErrorCode::NotEndomorphism,    ErrorCode::StabilizationFailure,
    ErrorCode::Unsupported,         ErrorCode::SingularStep,       ErrorCode::NonCommutingTarget,
    ErrorCode::VerificationFailure, ErrorCode::LiftDivergence,     ErrorCode::ParseError,
    ErrorCode::VersionMismatch};

}  // namespace

TEST_CASE("exit codes are distinct and documented") {
  std::set<int> seen;
  for (ErrorCode c : kAllCodes) {
    const int code = cli::exit_code(c);
    CHECK(code >= 2);
    CHECK(code < 64);
    CHECK(seen.insert(code).second);
  }
  CHECK(cli::exit_code(ErrorCode::ParseError) == 2);
  CHECK(cli::exit_code(ErrorCode::AxiomViolation) == 3);
  CHECK(cli::exit_code(ErrorCode::SingularStep) == 4);
  CHECK(cli::exit_code(ErrorCode::PrecisionExhausted) == 5);
}

TEST_CASE("build-lt2 reports the congruences and a group-law document") {
  const Run r = run({"build-lt2", "--p", "2", "--h1", "1", "--h2", "1", "--degree", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["linear_congruence"] == true);
  CHECK(report["frobenius_congruence"] == true);
  CHECK(report["axioms_degree"] == 8);
  const SeriesDocument doc = parse_series_document(report["document"].get<std::string>());
  CHECK(doc.kind == DocumentKind::GroupLaw);
  CHECK(doc.series.size() == 2);
}

TEST_CASE("axiom violations exit with the witness") {
  const std::string path = write("non_unital.txt", non_unital_law());
  const Run r = run({"validate-group", path});
  CHECK(r.code == cli::exit_code(ErrorCode::AxiomViolation));
  CHECK(r.out.empty());
  CHECK(r.err.find("unit") != std::string::npos);
  CHECK(r.err.find("witness") != std::string::npos);
  const Run ok = run({"validate-group", "@M", "--p", "3"});
  CHECK(ok.code == 0);
}

TEST_CASE("the root-of-unity fixture stops at its singular degree") {
  const Run r = run({"reconstruct", "@gamma", "--p", "5", "--degree", "8"});
  CHECK(r.code == cli::exit_code(ErrorCode::SingularStep));
  CHECK(r.err.find("degree 5") != std::string::npos);
  const Run json = run({"reconstruct", "@gamma", "--p", "5", "--degree", "8", "--format", "json"});
  const auto e = nlohmann::json::parse(json.err);
  CHECK(e["error"] == "SingularStep");
  CHECK(e["exit"] == cli::exit_code(ErrorCode::SingularStep));
}

TEST_CASE("precision and parse failures") {
  CHECK(run({"build-lt2", "--p", "2", "--precision", "2", "--degree", "8"}).code ==
        cli::exit_code(ErrorCode::PrecisionExhausted));
  const std::string text = serialize(named_fixture(PrecisionContext::make(3, 20, 6), "M"));
  const std::string truncated = write("truncated.txt", text.substr(0, text.size() / 2));
  const Run r = run({"validate-group", truncated});
  CHECK(r.code == cli::exit_code(ErrorCode::ParseError));
  CHECK(r.err.find("offset") != std::string::npos);
  std::string future = text;
  future.replace(future.find("padic-series 1"), 14, "padic-series 9");
  CHECK(run({"validate-group", write("future.txt", future)}).code == cli::exit_code(ErrorCode::VersionMismatch));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"no-such-command"}).code == cli::kExitUsage);
  CHECK(run({"validate-group"}).code == cli::kExitUsage);
  CHECK(run({"intersect", "@M", "--p", "3"}).code == cli::kExitUsage);
  CHECK(run({"height", "@M", "--p", "3", "--level", "0"}).code == cli::kExitUsage);
  CHECK(run({"validate-group", "@M"}).code == cli::exit_code(ErrorCode::InvalidArgument));
  CHECK(run({"validate-group", "@nothing", "--p", "3"}).code == cli::exit_code(ErrorCode::InvalidArgument));
}

TEST_CASE("parameters are validated before any computation") {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"torsion", "@M", "--p", "3", "--extension", "@cyclotomic:x"},
           {"orbit", "@pM", "--p", "3", "--point", "t;;"},
           {"reconstruct", "@pM", "--p", "3", "--target", "1,2;3"},
           {"copolygon", "@M", "--p", "3", "--xi", "1/0,2"},
           {"mul-map", "@M", "--p", "3", "--n", "two"},
       }) {
    const Run r = run(args);
    CHECK(r.code == cli::exit_code(ErrorCode::InvalidArgument));
    CHECK(r.out.empty());
  }
  const std::string path = write("ctx.txt", serialize(named_fixture(PrecisionContext::make(3, 20, 6), "M")));
  CHECK(run({"validate-group", path, "--p", "5"}).code == cli::exit_code(ErrorCode::InvalidArgument));
  CHECK(run({"validate-group", path, "--p", "3", "--degree", "6"}).code == 0);
}

TEST_CASE("subcommand reports") {
  const auto json = [](const std::vector<std::string>& args) {
    std::vector<std::string> a = args;
    a.push_back("--format");
    a.push_back("json");
    const Run r = run(a);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
  };
  CHECK(json({"height", "@M", "--p", "3", "--level", "2"})["kernel_count"] == "9");
  CHECK(json({"height", "@A", "--p", "3"})["kernel_count"].is_null());
  CHECK(json({"stability", "@gamma", "--p", "5"})["stable"] == false);
  CHECK(json({"stability", "@pM", "--p", "5"})["stable"] == true);
  const auto tors = json({"torsion", "@M", "--p", "3", "--extension", "@cyclotomic:1"});
  CHECK(tors["torsion"]["roots"].size() == 3);
  const auto inter = json({"intersect", "@M", "@A", "--p", "3", "--extension", "@cyclotomic:1"});
  CHECK(inter["shared"].size() == 1);
  const auto orbit = json({"orbit", "@pM", "--p", "3", "--extension", "@cyclotomic:2", "--point", "t", "--degree", "12"});
  CHECK(orbit["status"].get<std::string>().find("escape") != std::string::npos);
  const auto bound = json({"bound-check", "@M", "--p", "3", "--point", "3;-3"});
  CHECK(bound["holds"] == true);
  const auto cop = json({"copolygon", "@M", "--p", "3", "--xi", "1,1/2"});
  CHECK(cop["value"] == "1/2");
  const auto mm = json({"mul-map", "@M", "--p", "3", "--n", "-2"});
  CHECK(parse_series_document(mm["document"].get<std::string>()).series ==
        fg_multiplication_map(fg_validate(multiplicative_law(PrecisionContext::make(3, 20, 12))), -2L).series);
  const auto gfj = json({"group-from-jacobian", "@pM", "--p", "3"});
  CHECK(parse_series_document(gfj["document"].get<std::string>()).series == multiplicative_law(PrecisionContext::make(3, 20, 12)));
  const auto neg = json({"negation", "@A", "--p", "3"});
  CHECK(neg["document"].get<std::string>().find("kind endo") != std::string::npos);
}

TEST_CASE("documents written with --out round trip") {
  const std::string path = (scratch_dir() / "lt2.txt").string();
  const Run r = run({"build-lt2", "--p", "3", "--h1", "1", "--h2", "1", "--degree", "9", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("written") != std::string::npos);
  const Run v = run({"validate-group", path, "--format", "json"});
  REQUIRE(v.code == 0);
  CHECK(nlohmann::json::parse(v.out)["dimension"] == 2);
  const Run h = run({"height", path, "--format", "json"});
  REQUIRE(h.code == 0);
}

TEST_CASE("identical invocations produce identical bytes") {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"build-lt2", "--p", "2", "--h1", "1", "--h2", "2", "--degree", "8"},
           {"intersect", "@M", "@M-twisted", "--p", "3", "--extension", "@cyclotomic:1", "--format", "json"},
           {"reconstruct", "@pM", "--p", "5", "--target", "7"},
           {"orbit", "@pM", "--p", "2", "--extension", "@cyclotomic:3", "--point", "t"},
       }) {
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
