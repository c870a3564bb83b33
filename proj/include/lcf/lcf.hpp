#pragma once

// Exact arithmetic for Levi-Civita and p-adic Levi-Civita fields, with an
// engine that isometrically embeds finite ultrametric spaces into them and
// certifies the coefficient-distinctness side conditions.

#include "charmode.hpp"
#include "coefficient.hpp"
#include "embedding.hpp"
#include "errors.hpp"
#include "exponent.hpp"
#include "json_io.hpp"
#include "padic.hpp"
#include "padic_series.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "ultraspace.hpp"
#include "urysohn.hpp"
