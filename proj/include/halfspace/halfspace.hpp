#pragma once

#include "specfun.hpp"
#include "quadrature.hpp"
#include "jet.hpp"
#include "profiles.hpp"
#include "test_functions.hpp"
#include "radial_algebra.hpp"
#include "kernels.hpp"
#include "solver.hpp"
#include "verification.hpp"
