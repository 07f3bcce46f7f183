#pragma once

#include "nhcl/analytic.hpp"
#include "nhcl/classical.hpp"
#include "nhcl/coherent.hpp"
#include "nhcl/error.hpp"
#include "nhcl/fixed_points.hpp"
#include "nhcl/floquet.hpp"
#include "nhcl/geometry.hpp"
#include "nhcl/husimi.hpp"
#include "nhcl/linalg.hpp"
#include "nhcl/operators.hpp"
#include "nhcl/quantum.hpp"
#include "nhcl/spectral.hpp"
#include "nhcl/state.hpp"
