#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "fgdyn/commutant.hpp"
#include "fgdyn/copolygon.hpp"
#include "fgdyn/document.hpp"
#include "fgdyn/dynamics.hpp"
#include "fgdyn/fixtures.hpp"
#include "fgdyn/lubin_tate.hpp"
#include "fgdyn/torsion.hpp"

namespace fgdyn::cli {

using Json = nlohmann::ordered_json;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 2;
    case ErrorCode::AxiomViolation: return 3;
    case ErrorCode::SingularStep: return 4;
    case ErrorCode::PrecisionExhausted: return 5;
    case ErrorCode::VersionMismatch: return 6;
    case ErrorCode::NotEndomorphism: return 7;
    case ErrorCode::NotInvertible: return 8;
    case ErrorCode::NonCommutingTarget: return 9;
    case ErrorCode::VerificationFailure: return 10;
    case ErrorCode::StabilizationFailure: return 11;
    case ErrorCode::LiftDivergence: return 12;
    case ErrorCode::DivergentPoint: return 13;
    case ErrorCode::Unsupported: return 14;
    case ErrorCode::InvalidArgument: return 15;
    case ErrorCode::DivisionByZero: return 16;
    case ErrorCode::MixedContext: return 17;
    case ErrorCode::ImpreciseValuation: return 18;
    case ErrorCode::BadModulus: return 19;
    case ErrorCode::NonzeroConstantTerm: return 20;
  }
  return kExitInternal;
}

namespace {

struct Config {
  std::string command;
  std::optional<unsigned> p;
  std::optional<int> precision;
  std::optional<int> degree;
  int h1 = 1;
  int h2 = 1;
  int level = 1;
  int budget = 32;
  std::string extension = "@base";
  std::string point;
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "table";
  std::string multiplier;
  std::string target;
  std::string block1;
  std::string block2;
  std::string xi;
  std::string mode = "series";
};

constexpr int kDefaultPrecision = 20;
constexpr int kDefaultDegree = 12;

Error usage(const std::string& what) { return Error(ErrorCode::InvalidArgument, what); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

PrecisionContext flag_context(const Config& cfg) {
  if (!cfg.p) throw usage("--p is required when no input document fixes the context");
  return PrecisionContext::make(*cfg.p, cfg.precision.value_or(kDefaultPrecision), cfg.degree.value_or(kDefaultDegree));
}

SeriesDocument load(const Config& cfg, const std::string& source) {
  if (!source.empty() && source[0] == '@') return named_fixture(flag_context(cfg), source.substr(1));
  SeriesDocument doc = parse_series_document(read_file(source));
  const PrecisionContext& ctx = doc.series.context();
  if ((cfg.p && *cfg.p != ctx.p) || (cfg.precision && *cfg.precision != ctx.precision) ||
      (cfg.degree && *cfg.degree != ctx.degree_cap)) {
    throw usage(source + " has context " + ctx.to_string() + ", which differs from the flags");
  }
  return doc;
}

Rational parse_rational(std::string_view s) {
  const std::size_t slash = s.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  const auto bad = [&] { return usage("expected a rational a or a/b, got '" + std::string(s) + "'"); };
  const std::string_view a = s.substr(0, slash);
  if (auto [e, ec] = std::from_chars(a.data(), a.data() + a.size(), num); ec != std::errc() || e != a.data() + a.size()) {
    throw bad();
  }
  if (slash != std::string_view::npos) {
    const std::string_view b = s.substr(slash + 1);
    if (auto [e, ec] = std::from_chars(b.data(), b.data() + b.size(), den);
        ec != std::errc() || e != b.data() + b.size() || den <= 0) {
      throw bad();
    }
  }
  return Rational(num, den);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  for (std::size_t start = 0;;) {
    const std::size_t at = std::min(s.find(sep, start), s.size());
    out.emplace_back(s.substr(start, at - start));
    if (at == s.size()) return out;
    start = at + 1;
  }
}

// Rows separated by ';', entries by ','; integers only.
PadicMatrix parse_matrix(const PrecisionContext& ctx, const std::string& text, int d) {
  std::vector<std::vector<long>> rows;
  for (const auto& row : split(text, ';')) {
    rows.emplace_back();
    for (const auto& entry : split(row, ',')) {
      long v = 0;
      auto [e, ec] = std::from_chars(entry.data(), entry.data() + entry.size(), v);
      if (ec != std::errc() || e != entry.data() + entry.size()) throw usage("bad matrix entry '" + entry + "'");
      rows.back().push_back(v);
    }
    if (static_cast<int>(rows.back().size()) != d) throw usage("matrix '" + text + "' must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (static_cast<int>(rows.size()) != d) throw usage("matrix '" + text + "' must be " + std::to_string(d) + "x" + std::to_string(d));
  return PadicMatrix::from_integers(ctx, rows);
}

std::string val(const Valuation& v) { return v.to_string(); }

Json point_json(const PointTuple& pt) {
  Json coords = Json::array();
  for (const auto& c : pt.coords()) {
    Json digits = Json::array();
    for (const auto& a : c.coeffs()) digits.push_back(encode_scalar(a));
    coords.push_back(digits);
  }
  return Json{{"value", pt.to_string()}, {"coefficients", coords}};
}

Json matrix_json(const PadicMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(encode_scalar(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

void emit_document(const Config& cfg, Json& report, const SeriesDocument& doc) {
  const std::string text = serialize(doc);
  if (cfg.out.empty()) {
    report["document"] = text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file || !(file << text)) throw usage("cannot write " + cfg.out);
  report["written"] = cfg.out;
}

Json roots_json(const std::vector<TorsionRoot>& roots) {
  Json out = Json::array();
  for (const auto& r : roots) {
    Json row = point_json(r.point);
    row["valuation"] = val(r.valuation);
    row["simple"] = r.simple;
    row["certified"] = to_string(r.certified);
    out.push_back(row);
  }
  return out;
}

Json failures_json(const std::vector<CandidateFailure>& failures) {
  Json out = Json::array();
  for (const auto& f : failures) {
    out.push_back({{"center", f.center.to_string()}, {"radius", to_string(f.radius)}, {"roots", f.roots}, {"reason", f.reason}});
  }
  return out;
}

Json level_json(const TorsionLevelSet& t) {
  Json out{{"level", t.level},
           {"extension", t.extension->label()},
           {"found", t.roots.size()},
           {"expected", t.expected ? Json(t.expected->get_str()) : Json(nullptr)},
           {"complete", t.complete},
           {"multiplicity_free", t.multiplicity_free},
           {"verdict", t.verdict}};
  out["roots"] = roots_json(t.roots);
  out["failures"] = failures_json(t.failures);
  return out;
}

Json trace_json(const ReconstructionTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"degree", s.degree},
                     {"determinant_valuation", val(s.determinant_valuation)},
                     {"correction_valuation", val(s.correction_valuation)}});
  }
  return Json{{"budget", trace.budget}, {"inverted_degrees", trace.inverted_degrees}, {"steps", steps}};
}

// Every string-valued parameter, checked before any module operation runs.
struct Prepared {
  std::optional<ExtensionPtr> extension;
  std::optional<PointTuple> point;
  std::optional<PadicMatrix> target;
  std::optional<PadicMatrix> block1;
  std::optional<PadicMatrix> block2;
  std::optional<std::pair<Rational, Rational>> xi;
  mpz_class multiplier;
};

Prepared prepare(const Config& cfg, const std::vector<SeriesDocument>& docs) {
  Prepared out;
  const std::string& cmd = cfg.command;
  if (docs.empty()) return out;
  const TupleSeries& s = docs.front().series;
  const PrecisionContext& ctx = s.context();
  const auto identity = PadicMatrix::identity(ctx, static_cast<std::size_t>(s.size()));
  if (cmd == "mul-map" && out.multiplier.set_str(cfg.multiplier, 10) != 0) throw usage("--n must be an integer");
  if (cmd == "reconstruct") out.target = cfg.target.empty() ? identity : parse_matrix(ctx, cfg.target, s.size());
  if (cmd == "group-from-jacobian") {
    out.block1 = cfg.block1.empty() ? identity : parse_matrix(ctx, cfg.block1, s.size());
    out.block2 = cfg.block2.empty() ? identity : parse_matrix(ctx, cfg.block2, s.size());
  }
  if (cmd == "copolygon" || cmd == "bound-check") {
    if (s.size() != 1) throw usage(cmd + " takes a single series");
  }
  if (cmd == "copolygon") {
    const auto parts = split(cfg.xi, ',');
    if (parts.size() != 2) throw usage("--xi takes two rationals, e.g. 1,1/2");
    out.xi = std::pair(parse_rational(parts[0]), parse_rational(parts[1]));
  }
  if (cmd == "torsion" || cmd == "intersect" || cmd == "bound-check" || cmd == "orbit") {
    out.extension = resolve_extension(ctx, cfg.extension);
  }
  if (cmd == "bound-check" || cmd == "orbit") out.point = parse_point_literal(*out.extension, cfg.point);
  return out;
}

FormalGroupLaw group_of(const SeriesDocument& doc) { return fg_validate(doc.series); }

Json run_command(const Config& cfg, const std::vector<SeriesDocument>& docs, const Prepared& prep) {
  Json report{{"command", cfg.command}};
  const std::string& cmd = cfg.command;
  if (cmd == "build-lt2") {
    LubinTate2Params params;
    params.p = *cfg.p;
    params.h1 = cfg.h1;
    params.h2 = cfg.h2;
    params.degree = cfg.degree.value_or(kDefaultDegree);
    params.precision = cfg.precision.value_or(0);
    const LubinTate2 lt = lt2_build(params);
    report["context"] = lt.group.context().to_string();
    report["denominator_depth"] = lt.denominator_depth;
    report["linear_congruence"] = lt.congruences.linear_ok;
    report["frobenius_congruence"] = lt.congruences.frobenius_ok;
    report["congruence_detail"] = lt.congruences.detail;
    report["axioms_degree"] = lt.group.certificate().degree;
    report["commutative"] = lt.group.certificate().commutative;
    emit_document(cfg, report, make_document(lt.group.law(), DocumentKind::GroupLaw));
    return report;
  }
  const SeriesDocument& in = docs.front();
  report["context"] = in.series.context().to_string();
  if (cmd == "validate-group") {
    const FormalGroupLaw g = group_of(in);
    report["dimension"] = g.dimension();
    report["axioms_degree"] = g.certificate().degree;
    report["commutative"] = g.certificate().commutative;
    return report;
  }
  if (cmd == "negation") {
    emit_document(cfg, report, make_document(fg_negation(group_of(in)), DocumentKind::Endo));
    return report;
  }
  if (cmd == "mul-map") {
    const EndoSeries e = fg_multiplication_map(group_of(in), prep.multiplier);
    report["multiplier"] = prep.multiplier.get_str();
    report["certified_degree"] = e.certified_degree ? Json(*e.certified_degree) : Json(nullptr);
    emit_document(cfg, report, make_document(e.series, DocumentKind::Endo));
    return report;
  }
  if (cmd == "height") {
    const FormalGroupLaw g = group_of(in);
    const HeightReport h = height_and_kernel_count(g, cfg.level);
    report["level"] = h.level;
    report["height"] = h.height ? Json(*h.height) : Json("infinite up to degree " + std::to_string(g.context().degree_cap));
    report["kernel_count"] = h.kernel_count ? Json(h.kernel_count->get_str()) : Json(nullptr);
    report["rank"] = h.rank ? Json(h.rank->get_str()) : Json(nullptr);
    report["method"] = h.method;
    return report;
  }
  if (cmd == "stability") {
    const StabilityVerdict v = stability_classify(in.series);
    report["stable"] = v.stable();
    report["verdict"] = v.to_string();
    return report;
  }
  if (cmd == "reconstruct") {
    const ReconstructionTrace trace = commutant_reconstruct(in.series, *prep.target);
    report["target"] = matrix_json(*prep.target);
    report["trace"] = trace_json(trace);
    emit_document(cfg, report, make_document(trace.result, DocumentKind::Endo));
    return report;
  }
  if (cmd == "group-from-jacobian") {
    const ReconstructionTrace trace = group_from_jacobian(in.series, *prep.block1, *prep.block2);
    report["trace"] = trace_json(trace);
    emit_document(cfg, report, make_document(trace.result, DocumentKind::GroupLaw));
    return report;
  }
  if (cmd == "copolygon") {
    const Copolygon poly = Copolygon::build(in.series[0]);
    const Copolygon::Value v = poly.evaluate(prep.xi->first, prep.xi->second);
    Json planes = Json::array();
    for (const auto& pl : poly.planes()) planes.push_back({{"i", pl.i}, {"j", pl.j}, {"c", pl.c}});
    report["planes"] = planes;
    report["value"] = val(v.value);
    report["achieving"] = v.achieving;
    return report;
  }
  if (cmd == "torsion") {
    report["torsion"] = level_json(torsion_probe_dim1(group_of(in), cfg.level, *prep.extension));
    return report;
  }
  if (cmd == "intersect") {
    const IntersectionReport r = intersection_probe(group_of(in), group_of(docs.at(1)), cfg.level, *prep.extension);
    report["first"] = level_json(r.first);
    report["second"] = level_json(r.second);
    report["shared"] = r.shared;
    report["identical_laws"] = r.identical_laws;
    report["consistent"] = r.consistent;
    report["verdict"] = r.verdict;
    return report;
  }
  if (cmd == "bound-check") {
    const BoundCheck b = valuation_bound_check(in.series[0], *prep.point);
    report["value_valuation"] = val(b.value_valuation);
    report["value_certified"] = b.value_certified;
    report["bound"] = val(b.bound);
    report["holds"] = b.holds;
    report["strict"] = b.strict;
    report["certified"] = to_string(b.certified);
    return report;
  }
  if (cmd == "orbit") {
    const EvalMode mode = cfg.mode == "polynomial" ? EvalMode::Polynomial : EvalMode::Series;
    const OrbitRecord r = orbit_analyze(in.series, *prep.point, cfg.budget, mode);
    report["status"] = r.status_string();
    report["tail"] = r.tail;
    report["period"] = r.period;
    report["invertible"] = r.invertible;
    report["growth_checked"] = r.growth_checked;
    report["growth_violations"] = r.growth_violations;
    Json steps = Json::array();
    for (std::size_t i = 0; i < r.iterates.size(); ++i) {
      Json row = point_json(r.iterates[i]);
      row["valuation"] = i < r.valuations.size() ? val(r.valuations[i]) : "";
      steps.push_back(row);
    }
    report["iterates"] = steps;
    return report;
  }
  throw usage("unknown subcommand " + cmd);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void render_table(std::ostream& out, const Json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : value.items()) {
    if (key == "document") continue;
    if (v.is_object()) {
      out << pad << key << ":\n";
      render_table(out, v, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << pad << key << ":\n";
      for (const auto& row : v) {
        out << pad << "  -";
        for (const auto& [k, x] : row.items()) {
          if (k != "coefficients") out << ' ' << k << '=' << (x.is_array() ? x.dump() : scalar_text(x));
        }
        out << '\n';
      }
    } else if (v.is_array()) {
      out << pad << key << ": " << v.dump() << '\n';
    } else {
      out << pad << key << ": " << scalar_text(v) << '\n';
    }
  }
}

std::size_t expected_inputs(const std::string& cmd) {
  if (cmd == "build-lt2") return 0;
  if (cmd == "intersect") return 2;
  return 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Formal groups and p-adic dynamics at working precision"};
  app.name(args.empty() ? "fgdyn" : args.front());
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--p", cfg.p, "Prime, for fixtures and build-lt2")->check(CLI::Range(2u, 1u << 20));
  app.add_option("--precision", cfg.precision, "Absolute precision N")->check(CLI::Range(1, 1 << 20));
  app.add_option("--degree", cfg.degree, "Truncation degree D")->check(CLI::Range(2, 255));
  app.add_option("--out", cfg.out, "Write the series document here instead of into the report");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"table", "json"}));

  const auto input = [&](CLI::App* sub, std::size_t n) {
    sub->add_option("inputs", cfg.inputs, "Series documents, or @fixture names")->required()->expected(static_cast<int>(n));
  };
  const auto extension = [&](CLI::App* sub) {
    sub->add_option("--extension", cfg.extension, "@base, @cyclotomic:<n> or an extension document path");
  };
  const auto point = [&](CLI::App* sub) {
    sub->add_option("--point", cfg.point, "Coordinates e.g. 't;0,2'")->required();
  };

  auto* lt2 = app.add_subcommand("build-lt2", "Two-dimensional Lubin-Tate law from its logarithm");
  lt2->add_option("--h1", cfg.h1)->check(CLI::Range(1, 8));
  lt2->add_option("--h2", cfg.h2)->check(CLI::Range(1, 8));
  input(app.add_subcommand("validate-group", "Check the group axioms up to degree D"), 1);
  input(app.add_subcommand("negation", "Formal inverse of a group law"), 1);
  auto* mul = app.add_subcommand("mul-map", "Multiplication-by-n endomorphism");
  input(mul, 1);
  mul->add_option("--n", cfg.multiplier, "Multiplier")->required();
  auto* rec = app.add_subcommand("reconstruct", "Series commuting with u with a given Jacobian at 0");
  input(rec, 1);
  rec->add_option("--target", cfg.target, "Jacobian target, rows ';' entries ','; default identity");
  auto* gfj = app.add_subcommand("group-from-jacobian", "Group law rebuilt from an endomorphism");
  input(gfj, 1);
  gfj->add_option("--b1", cfg.block1, "dH/dX(0); default identity");
  gfj->add_option("--b2", cfg.block2, "dH/dY(0); default identity");
  input(app.add_subcommand("stability", "Stability of an endomorphism"), 1);
  auto* cop = app.add_subcommand("copolygon", "Newton copolygon of a two-variable series");
  input(cop, 1);
  cop->add_option("--xi", cfg.xi, "Evaluation point xi1,xi2")->required();
  auto* bc = app.add_subcommand("bound-check", "Compare v(f(theta)) with the copolygon bound");
  input(bc, 1);
  extension(bc);
  point(bc);
  auto* orb = app.add_subcommand("orbit", "Iterate a map from a point");
  input(orb, 1);
  extension(orb);
  point(orb);
  orb->add_option("--budget", cfg.budget, "Maximum number of steps")->check(CLI::Range(1, 1 << 16));
  orb->add_option("--mode", cfg.mode, "Evaluation mode")->check(CLI::IsMember({"series", "polynomial"}));
  auto* tor = app.add_subcommand("torsion", "Roots of [p^n] in an extension");
  input(tor, 1);
  extension(tor);
  tor->add_option("--level", cfg.level)->check(CLI::Range(1, 16));
  auto* inter = app.add_subcommand("intersect", "Shared torsion of two laws");
  input(inter, 2);
  extension(inter);
  inter->add_option("--level", cfg.level)->check(CLI::Range(1, 16));
  auto* height = app.add_subcommand("height", "Height and kernel count");
  input(height, 1);
  height->add_option("--level", cfg.level)->check(CLI::Range(1, 16));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const bool json = cfg.format == "json";
  try {
    if (cfg.command == "build-lt2" && !cfg.p) throw usage("build-lt2 needs --p");
    if (cfg.inputs.size() != expected_inputs(cfg.command)) throw usage(cfg.command + " takes " + std::to_string(expected_inputs(cfg.command)) + " input(s)");
    std::vector<SeriesDocument> docs;
    for (const auto& source : cfg.inputs) docs.push_back(load(cfg, source));
    if (docs.size() == 2) require_same_context(docs[0].series.context(), docs[1].series.context());
    const Prepared prep = prepare(cfg, docs);
    const Json report = run_command(cfg, docs, prep);
    if (json) {
      out << report.dump(2) << '\n';
    } else {
      render_table(out, report, 0);
      if (report.contains("document")) out << '\n' << report["document"].get<std::string>();
    }
    return kExitOk;
  } catch (const Error& e) {
    if (json) {
      err << Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"exit", exit_code(e.code())}}.dump()
          << '\n';
    } else {
      err << app.get_name() << ": " << to_string(e.code()) << ": " << e.what() << '\n';
    }
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << app.get_name() << ": internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace fgdyn::cli
