#pragma once

#include "ccopt/composite.hpp"
#include "ccopt/descent.hpp"
#include "ccopt/linesearch.hpp"
#include "ccopt/lipschitz.hpp"
#include "ccopt/problems.hpp"
#include "ccopt/subproblem.hpp"
#include "ccopt/trace.hpp"
#include "ccopt/trustregion.hpp"
