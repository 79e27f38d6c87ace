#pragma once

#include <string>
#include <vector>

#include "fgdyn/document.hpp"
#include "fgdyn/formal_group.hpp"

namespace fgdyn {

/// X + Y + XY.
TupleSeries multiplicative_law(const PrecisionContext& ctx);

/// X + Y in dimension d.
TupleSeries additive_law(const PrecisionContext& ctx, int d = 1);

/// phi o M o (phi^-1(X), phi^-1(Y)) for phi = x + p x^2.
TupleSeries twisted_multiplicative_law(const PrecisionContext& ctx);

/// (g x, g^{p^3} y) with g the Teichmuller lift of r.
TupleSeries teichmuller_diagonal(const PrecisionContext& ctx, std::uint32_t r);

/// (x + y^p/p + x^{p^2}/p^2, y + x^p/p + y^{p^2}/p^2).
TupleSeries alternating_companion(const PrecisionContext& ctx);

/// Names accepted by named_fixture.
std::vector<std::string> fixture_names();

/// M, A, A2, M-twisted, pM (the p-series of M), gamma (teichmuller_diagonal
/// with r = 2), gamma-companion, lt2:<h1>,<h2> (the group law) and
/// lt2-p:<h1>,<h2> (its p-series).
SeriesDocument named_fixture(const PrecisionContext& ctx, const std::string& name);

}  // namespace fgdyn
