#include "fgdyn/document.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "accumulate.hpp"

namespace fgdyn {

namespace {

constexpr std::uint32_t kMaxDocumentPrime = 36;

struct Token {
  std::string_view text;
  std::size_t offset;
};

struct Record {
  std::vector<Token> fields;
  std::size_t line;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::optional<Record> next() {
    if (pushed_) {
      std::optional<Record> out = std::move(pushed_);
      pushed_.reset();
      return out;
    }
    while (pos_ < text_.size()) {
      const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
      Record rec{{}, ++line_};
      std::size_t i = pos_;
      while (i < end) {
        while (i < end && is_space(text_[i])) ++i;
        const std::size_t start = i;
        while (i < end && !is_space(text_[i])) ++i;
        if (i > start) rec.fields.push_back(Token{text_.substr(start, i - start), start});
      }
      pos_ = end + 1;
      if (!rec.fields.empty()) return rec;
    }
    return std::nullopt;
  }

  Record expect(std::string_view key, std::size_t nfields) {
    auto rec = next();
    if (!rec) fail_at_end("expected '" + std::string(key) + "'");
    if (rec->fields[0].text != key) fail(*rec, 0, "expected '" + std::string(key) + "'");
    if (nfields != 0 && rec->fields.size() != nfields + 1) {
      fail(*rec, 0, "'" + std::string(key) + "' takes " + std::to_string(nfields) + " field(s)");
    }
    return *rec;
  }

  void push_back(Record rec) { pushed_ = std::move(rec); }

  [[noreturn]] void fail_at_end(const std::string& what) const {
    throw ParseError(line_ + 1, text_.size(), "unexpected end of input: " + what);
  }

  [[noreturn]] static void fail(const Record& rec, std::size_t field, const std::string& what) {
    const std::size_t at = field < rec.fields.size() ? rec.fields[field].offset : rec.fields.back().offset;
    throw ParseError(rec.line, at, what);
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
  std::optional<Record> pushed_;
};

long parse_long(const Record& rec, std::size_t field, long lo, long hi) {
  const std::string_view s = rec.fields.at(field).text;
  long out = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || end != s.data() + s.size()) Reader::fail(rec, field, "expected an integer");
  if (out < lo || out > hi) {
    Reader::fail(rec, field, "value " + std::string(s) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

std::string digits_of(const mpz_class& unit, std::uint32_t p) {
  std::string out = mpz_class(abs(unit)).get_str(static_cast<int>(p));
  std::reverse(out.begin(), out.end());
  return unit < 0 ? "-" + out : out;
}

PadicScalar parse_scalar(const PrecisionContext& ctx, const Record& rec, std::size_t first) {
  if (rec.fields.size() < first + 3) Reader::fail(rec, rec.fields.size() - 1, "scalar needs valuation, digits, precision");
  const std::string_view vtext = rec.fields[first].text;
  std::string digits(rec.fields[first + 1].text);
  const std::string_view ptext = rec.fields[first + 2].text;
  const bool exact = ptext == "exact";
  const long prec = exact ? PadicScalar::kExactPrecision : parse_long(rec, first + 2, 1, ctx.precision);
  PadicScalar out(ctx);
  if (vtext == "inf") {
    if (digits != "0") Reader::fail(rec, first + 1, "zero must have digits 0");
    out = exact ? PadicScalar(ctx) : PadicScalar::zero(ctx, static_cast<int>(prec));
  } else {
    const long v = parse_long(rec, first, -(1L << 20), 1L << 20);
    const bool negative = !digits.empty() && digits[0] == '-';
    if (negative) digits.erase(0, 1);
    std::reverse(digits.begin(), digits.end());
    mpz_class unit;
    if (digits.empty() || unit.set_str(digits, static_cast<int>(ctx.p)) != 0) {
      Reader::fail(rec, first + 1, "digits are not base " + std::to_string(ctx.p));
    }
    if (negative) unit = -unit;
    if (!exact && v >= prec) Reader::fail(rec, first, "valuation must lie below the precision");
    out = PadicScalar::assemble(ctx, unit, v, prec, exact);
  }
  std::string canonical = encode_scalar(out);
  std::string given = std::string(vtext) + " " + std::string(rec.fields[first + 1].text) + " " + std::string(ptext);
  if (canonical != given) Reader::fail(rec, first, "scalar is not in canonical form (expected '" + canonical + "')");
  return out;
}

PrecisionContext parse_context(Reader& reader, bool with_precision) {
  const Record prec_p = reader.expect("p", 1);
  const long p = parse_long(prec_p, 1, 2, kMaxDocumentPrime);
  if (!is_prime(static_cast<std::uint64_t>(p))) Reader::fail(prec_p, 1, "p must be prime");
  if (!with_precision) return PrecisionContext::make(static_cast<std::uint32_t>(p), 1, 2);
  const Record n = reader.expect("precision", 1);
  const long prec = parse_long(n, 1, 1, 1L << 20);
  const Record d = reader.expect("degree", 1);
  const long deg = parse_long(d, 1, 2, 255);
  return PrecisionContext::make(static_cast<std::uint32_t>(p), static_cast<int>(prec), static_cast<int>(deg));
}

void expect_version(Reader& reader, std::string_view magic) {
  auto rec = reader.next();
  if (!rec) reader.fail_at_end("expected '" + std::string(magic) + "'");
  if (rec->fields[0].text != magic || rec->fields.size() != 2) {
    Reader::fail(*rec, 0, "expected '" + std::string(magic) + " <version>'");
  }
  const long version = parse_long(*rec, 1, 0, 1L << 20);
  if (version != kSeriesFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, std::string(magic) + " version " + std::to_string(version) +
                                                " is not supported (this build reads version " +
                                                std::to_string(kSeriesFormatVersion) + ")");
  }
}

void expect_end(Reader& reader) {
  reader.expect("end", 0);
  if (auto extra = reader.next()) Reader::fail(*extra, 0, "content after 'end'");
}

std::string header(std::string_view magic, const PrecisionContext& ctx, bool with_precision) {
  std::ostringstream out;
  out << magic << ' ' << kSeriesFormatVersion << "\np " << ctx.p << '\n';
  if (with_precision) out << "precision " << ctx.precision << "\ndegree " << ctx.degree_cap << '\n';
  return out.str();
}

void write_modulus(std::ostringstream& out, const Extension& ext) {
  out << "kind " << to_string(ext.kind()) << '\n';
  for (std::size_t i = 0; i < ext.modulus().size(); ++i) out << "m " << i << ' ' << encode_scalar(ext.modulus()[i]) << '\n';
}

ExtensionPtr read_modulus(Reader& reader, const PrecisionContext& ctx) {
  const Record kind_rec = reader.expect("kind", 1);
  ModulusKind kind;
  if (kind_rec.fields[1].text == to_string(ModulusKind::Eisenstein)) {
    kind = ModulusKind::Eisenstein;
  } else if (kind_rec.fields[1].text == to_string(ModulusKind::Unramified)) {
    kind = ModulusKind::Unramified;
  } else {
    Reader::fail(kind_rec, 1, "unknown extension kind");
  }
  std::vector<PadicScalar> coeffs;
  for (;;) {
    auto rec = reader.next();
    if (!rec) reader.fail_at_end("expected 'm' or the point/extension body");
    if (rec->fields[0].text != "m") {
      reader.push_back(*rec);
      break;
    }
    if (rec->fields.size() != 5) Reader::fail(*rec, 0, "'m' takes 4 fields");
    if (parse_long(*rec, 1, 0, 1024) != static_cast<long>(coeffs.size())) Reader::fail(*rec, 1, "modulus indices must run 0, 1, ...");
    coeffs.push_back(parse_scalar(ctx, *rec, 2));
  }
  return Extension::create(ctx, std::move(coeffs), kind);
}

}  // namespace

std::string_view to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Series: return "series";
    case DocumentKind::Tuple: return "tuple";
    case DocumentKind::GroupLaw: return "group-law";
    case DocumentKind::Endo: return "endo";
  }
  return "tuple";
}

namespace {

const char* shape_error(DocumentKind kind, int nvars, int ncomp) {
  if (kind == DocumentKind::Series && ncomp != 1) return "a series document has one component";
  if (kind == DocumentKind::GroupLaw && nvars != 2 * ncomp) return "a group law has d components in 2d variables";
  if (kind == DocumentKind::Endo && nvars != ncomp) return "an endomorphism has d components in d variables";
  return nullptr;
}

}  // namespace

std::string encode_scalar(const PadicScalar& c) {
  const std::string prec = c.is_exact() ? "exact" : std::to_string(c.precision());
  if (c.is_zero()) return "inf 0 " + prec;
  return std::to_string(c.raw_valuation()) + " " + digits_of(c.unit(), c.context().p) + " " + prec;
}

SeriesDocument make_document(const TupleSeries& series, DocumentKind kind) {
  SeriesDocument doc{kind, {}, series};
  const int n = series.nvars();
  if (const char* why = shape_error(kind, n, series.size())) throw Error(ErrorCode::InvalidArgument, why);
  if (kind == DocumentKind::GroupLaw) {
    for (int i = 0; i < n / 2; ++i) doc.variables.push_back("X" + std::to_string(i + 1));
    for (int i = 0; i < n / 2; ++i) doc.variables.push_back("Y" + std::to_string(i + 1));
  } else {
    for (int i = 0; i < n; ++i) doc.variables.push_back("x" + std::to_string(i + 1));
  }
  return doc;
}

std::string serialize(const SeriesDocument& doc) {
  const TupleSeries& s = doc.series;
  const PrecisionContext& ctx = s.context();
  if (ctx.p > kMaxDocumentPrime) throw Error(ErrorCode::Unsupported, "documents support p <= 36");
  if (static_cast<int>(doc.variables.size()) != s.nvars()) {
    throw Error(ErrorCode::InvalidArgument, "document names " + std::to_string(doc.variables.size()) +
                                                " variables for a series in " + std::to_string(s.nvars()));
  }
  std::ostringstream out;
  out << header("padic-series", ctx, true) << "kind " << to_string(doc.kind) << "\nvars";
  for (const auto& v : doc.variables) out << ' ' << v;
  out << "\ncomponents " << s.size() << '\n';
  for (int c = 0; c < s.size(); ++c) {
    for (const auto& t : s[c].terms()) {
      out << "c " << c << ' ';
      for (int i = 0; i < s.nvars(); ++i) out << (i ? "," : "") << t.exp[i];
      out << ' ' << encode_scalar(t.coeff) << '\n';
    }
  }
  for (int c = 0; c < s.size(); ++c) {
    for (int n = 0; n <= ctx.degree_cap && s[c].has_absent_floor(); ++n) {
      const int k = s[c].absent_precision(n);
      if (k != INT32_MAX) out << "floor " << c << ' ' << n << ' ' << k << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

SeriesDocument parse_series_document(std::string_view text) {
  Reader reader(text);
  expect_version(reader, "padic-series");
  const PrecisionContext ctx = parse_context(reader, true);
  const Record kind_rec = reader.expect("kind", 1);
  DocumentKind kind = DocumentKind::Tuple;
  bool known = false;
  for (DocumentKind k : {DocumentKind::Series, DocumentKind::Tuple, DocumentKind::GroupLaw, DocumentKind::Endo}) {
    if (kind_rec.fields[1].text == to_string(k)) {
      kind = k;
      known = true;
    }
  }
  if (!known) Reader::fail(kind_rec, 1, "unknown kind (series, tuple, group-law, endo)");
  const Record vars = reader.expect("vars", 0);
  const int nvars = static_cast<int>(vars.fields.size()) - 1;
  if (nvars < 1 || nvars > Exponent::kMaxVars) Reader::fail(vars, 0, "between 1 and 16 variables are supported");
  std::vector<std::string> names;
  for (std::size_t i = 1; i < vars.fields.size(); ++i) names.emplace_back(vars.fields[i].text);
  const Record comps = reader.expect("components", 1);
  const int ncomp = static_cast<int>(parse_long(comps, 1, 1, 1024));
  if (const char* why = shape_error(kind, nvars, ncomp)) Reader::fail(comps, 1, why);

  std::vector<std::vector<Term>> terms(static_cast<std::size_t>(ncomp));
  std::optional<std::pair<int, Exponent>> last;
  std::vector<std::pair<Record, std::array<long, 3>>> floors;
  for (;;) {
    auto rec = reader.next();
    if (!rec) reader.fail_at_end("expected 'c', 'floor' or 'end'");
    const std::string_view key = rec->fields[0].text;
    if (key == "end") {
      reader.push_back(*rec);
      break;
    }
    if (key == "floor") {
      if (rec->fields.size() != 4) Reader::fail(*rec, 0, "'floor' takes 3 fields");
      const long comp = parse_long(*rec, 1, 0, ncomp - 1);
      const long deg = parse_long(*rec, 2, 0, ctx.degree_cap);
      const long k = parse_long(*rec, 3, 1, ctx.precision);
      if (!floors.empty()) {
        const auto& prev = floors.back().second;
        if (std::pair(comp, deg) <= std::pair(prev[0], prev[1])) Reader::fail(*rec, 1, "floor records out of order");
      }
      floors.emplace_back(*rec, std::array<long, 3>{comp, deg, k});
      continue;
    }
    if (key != "c") Reader::fail(*rec, 0, "expected 'c', 'floor' or 'end'");
    if (!floors.empty()) Reader::fail(*rec, 0, "'c' records must precede 'floor' records");
    if (rec->fields.size() != 6) Reader::fail(*rec, 0, "'c' takes 5 fields");
    const int comp = static_cast<int>(parse_long(*rec, 1, 0, ncomp - 1));
    std::vector<int> exps;
    std::string_view list = rec->fields[2].text;
    for (std::size_t start = 0;;) {
      const std::size_t comma = std::min(list.find(',', start), list.size());
      int e = -1;
      const auto [end, ec] = std::from_chars(list.data() + start, list.data() + comma, e);
      if (ec != std::errc() || end != list.data() + comma || e < 0 || e > ctx.degree_cap) {
        Reader::fail(*rec, 2, "bad exponent vector");
      }
      exps.push_back(e);
      if (comma == list.size()) break;
      start = comma + 1;
    }
    if (static_cast<int>(exps.size()) != nvars) Reader::fail(*rec, 2, "exponent vector length differs from vars");
    const Exponent exp = Exponent::from_vector(exps);
    if (exp.degree() > ctx.degree_cap) Reader::fail(*rec, 2, "monomial degree exceeds D");
    if (last && std::pair(comp, exp.key()) <= std::pair(last->first, last->second.key())) {
      Reader::fail(*rec, 1, "records out of canonical order");
    }
    last = std::pair(comp, exp);
    PadicScalar coeff = parse_scalar(ctx, *rec, 3);
    if (coeff.is_zero()) Reader::fail(*rec, 3, "stored coefficients must be nonzero");
    terms[static_cast<std::size_t>(comp)].push_back(Term{exp, std::move(coeff)});
  }
  expect_end(reader);

  std::vector<MultiSeries> components;
  for (auto& t : terms) components.push_back(MultiSeriesBuilder::adopt(ctx, nvars, std::move(t)));
  for (const auto& [rec, f] : floors) {
    MultiSeriesBuilder::lower_floor(components[static_cast<std::size_t>(f[0])], static_cast<int>(f[1]), f[2]);
  }
  return SeriesDocument{kind, std::move(names), TupleSeries(std::move(components))};
}

std::string serialize(const Extension& ext) {
  if (ext.context().p > kMaxDocumentPrime) throw Error(ErrorCode::Unsupported, "documents support p <= 36");
  std::ostringstream out;
  out << header("padic-extension", ext.context(), false);
  write_modulus(out, ext);
  out << "end\n";
  return out.str();
}

ExtensionPtr parse_extension_document(const PrecisionContext& ctx, std::string_view text) {
  Reader reader(text);
  expect_version(reader, "padic-extension");
  const Record prime = reader.expect("p", 1);
  if (parse_long(prime, 1, 2, kMaxDocumentPrime) != static_cast<long>(ctx.p)) {
    Reader::fail(prime, 1, "extension is over a different prime (working p = " + std::to_string(ctx.p) + ")");
  }
  ExtensionPtr ext = read_modulus(reader, ctx);
  expect_end(reader);
  return ext;
}

std::string serialize(const PointTuple& point) {
  const Extension& ext = *point.extension();
  if (ext.context().p > kMaxDocumentPrime) throw Error(ErrorCode::Unsupported, "documents support p <= 36");
  std::ostringstream out;
  out << header("padic-point", ext.context(), true);
  write_modulus(out, ext);
  out << "coordinates " << point.size() << '\n';
  for (int i = 0; i < point.size(); ++i) {
    const auto& coeffs = point[i].coeffs();
    for (std::size_t j = 0; j < coeffs.size(); ++j) out << "x " << i << ' ' << j << ' ' << encode_scalar(coeffs[j]) << '\n';
  }
  out << "end\n";
  return out.str();
}

PointTuple parse_point_document(std::string_view text) {
  Reader reader(text);
  expect_version(reader, "padic-point");
  const PrecisionContext ctx = parse_context(reader, true);
  ExtensionPtr ext = read_modulus(reader, ctx);
  const Record count = reader.expect("coordinates", 1);
  const long n = parse_long(count, 1, 1, 1024);
  const auto degree = static_cast<std::size_t>(ext->degree());
  std::vector<ExtScalar> coords;
  for (long i = 0; i < n; ++i) {
    std::vector<PadicScalar> coeffs;
    for (std::size_t j = 0; j < degree; ++j) {
      const Record rec = reader.expect("x", 5);
      if (parse_long(rec, 1, 0, n - 1) != i || parse_long(rec, 2, 0, 1024) != static_cast<long>(j)) {
        Reader::fail(rec, 1, "expected coordinate " + std::to_string(i) + ", power " + std::to_string(j));
      }
      coeffs.push_back(parse_scalar(ctx, rec, 3));
    }
    coords.emplace_back(ext, std::move(coeffs));
  }
  expect_end(reader);
  return PointTuple(std::move(coords));
}

ExtensionPtr resolve_extension(const PrecisionContext& ctx, const std::string& source) {
  if (source == "@base") return Extension::base(ctx);
  constexpr std::string_view cyclo = "@cyclotomic:";
  if (source.rfind(cyclo, 0) == 0) {
    int n = 0;
    const char* first = source.data() + cyclo.size();
    const auto [end, ec] = std::from_chars(first, source.data() + source.size(), n);
    if (ec != std::errc() || end != source.data() + source.size() || n < 1) {
      throw Error(ErrorCode::InvalidArgument, "expected @cyclotomic:<n> with n >= 1, got " + source);
    }
    return Extension::cyclotomic(ctx, n);
  }
  if (!source.empty() && source[0] == '@') throw Error(ErrorCode::InvalidArgument, "unknown built-in extension " + source);
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read extension file " + source);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_extension_document(ctx, text.str());
}

PointTuple parse_point_literal(const ExtensionPtr& ext, std::string_view text) {
  std::vector<ExtScalar> coords;
  const auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "point '" + std::string(text) + "': " + why);
  };
  for (std::size_t start = 0;;) {
    const std::size_t semi = std::min(text.find(';', start), text.size());
    const std::string_view coord = text.substr(start, semi - start);
    if (coord == "t") {
      coords.push_back(ExtScalar::generator(ext));
    } else {
      std::vector<long> coeffs;
      for (std::size_t s = 0;;) {
        const std::size_t comma = std::min(coord.find(',', s), coord.size());
        long c = 0;
        const auto [end, ec] = std::from_chars(coord.data() + s, coord.data() + comma, c);
        if (ec != std::errc() || end != coord.data() + comma) bad("expected integers or 't'");
        coeffs.push_back(c);
        if (comma == coord.size()) break;
        s = comma + 1;
      }
      if (static_cast<int>(coeffs.size()) > ext->degree()) bad("more coefficients than the extension degree");
      coords.push_back(ExtScalar::from_integers(ext, coeffs));
    }
    if (semi == text.size()) break;
    start = semi + 1;
  }
  return PointTuple(std::move(coords));
}

}  // namespace fgdyn
