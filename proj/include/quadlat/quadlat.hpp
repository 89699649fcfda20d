#pragma once

// Everything in one include.

#include "quadlat/errors.hpp"
#include "quadlat/cayley_table.hpp"
#include "quadlat/identities.hpp"
#include "quadlat/groupoid.hpp"
#include "quadlat/isomorphism.hpp"
#include "quadlat/zm_linear.hpp"
#include "quadlat/translatable.hpp"
#include "quadlat/qn_forms.hpp"
#include "quadlat/deduction.hpp"
#include "quadlat/qn_completion.hpp"
#include "quadlat/enumerate.hpp"
