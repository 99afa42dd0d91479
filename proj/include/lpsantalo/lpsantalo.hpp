#pragma once

#include "body.hpp"
#include "error.hpp"
#include "gauss_kronrod.hpp"
#include "geometry.hpp"
#include "hull.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "lp_polar.hpp"
#include "lp_simplex.hpp"
#include "quadrature.hpp"
#include "santalo.hpp"
