#pragma once

#include "rootbranch/error.hpp"
#include "rootbranch/expression.hpp"
#include "rootbranch/parser.hpp"
#include "rootbranch/param_domain.hpp"
#include "rootbranch/function_model.hpp"
#include "rootbranch/monic_poly.hpp"
#include "rootbranch/contour.hpp"
#include "rootbranch/rouche.hpp"
#include "rootbranch/continuation.hpp"
#include "rootbranch/problem.hpp"
