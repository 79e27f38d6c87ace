#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fgdyn/extension.hpp"
#include "fgdyn/tuple_series.hpp"

namespace fgdyn {

inline constexpr int kSeriesFormatVersion = 1;

enum class DocumentKind { Series, Tuple, GroupLaw, Endo };

std::string_view to_string(DocumentKind kind);

/// A tuple series with its context, variable names and kind tag.
///
/// Text form, one record per line:
///
///   padic-series 1
///   p 3
///   precision 20
///   degree 8
///   kind group-law
///   vars X1 Y1
///   components 1
///   c 0 1,0 0 1 exact
///   c 0 1,1 0 1 exact
///   floor 0 7 12
///   end
///
/// A `c` record is: component, exponent vector, valuation, unit digits in
/// base p (least significant first, `-` for a negative exact unit) and the
/// absolute precision or `exact`. Records are sorted by component, then by
/// exponent vector lexicographically. A `floor` record states that the absent
/// coefficients of a degree are known only modulo p^k.
struct SeriesDocument {
  DocumentKind kind = DocumentKind::Tuple;
  std::vector<std::string> variables;
  TupleSeries series;
};

/// Default variable names: X1..Xd Y1..Yd for group laws, x1..xn otherwise.
/// Throws InvalidArgument when the shape does not fit the kind.
SeriesDocument make_document(const TupleSeries& series, DocumentKind kind);

std::string serialize(const SeriesDocument& doc);

/// Throws ParseError, and VersionMismatch for an unknown format version.
SeriesDocument parse_series_document(std::string_view text);

/// Extension text form:
///
///   padic-extension 1
///   p 3
///   kind eisenstein
///   m 0 1 1 exact
///   m 1 inf 0 exact
///   m 2 0 1 exact
///   end
///
/// with `m` records giving modulus coefficients from the constant term up.
/// The coefficients are read in ctx, whose prime must match.
std::string serialize(const Extension& ext);
ExtensionPtr parse_extension_document(const PrecisionContext& ctx, std::string_view text);

/// A point with its full context and extension modulus; `x` records give
/// coordinate, power of t and the scalar.
std::string serialize(const PointTuple& point);
PointTuple parse_point_document(std::string_view text);

/// `@base`, `@cyclotomic:n`, or the path of an extension document.
ExtensionPtr resolve_extension(const PrecisionContext& ctx, const std::string& source);

/// Coordinates separated by `;`, each a comma-separated list of integer
/// coefficients of 1, t, t^2, ... or the word `t`; e.g. "0,1;3".
PointTuple parse_point_literal(const ExtensionPtr& ext, std::string_view text);

/// Scalar fields `<valuation> <digits> <precision>` as used in records.
std::string encode_scalar(const PadicScalar& c);

}  // namespace fgdyn
