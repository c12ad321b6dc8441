#pragma once

#include "layerlab/errors.hpp"
#include "layerlab/fields.hpp"
#include "layerlab/material.hpp"
#include "layerlab/navier_series.hpp"
#include "layerlab/numerics/bessel.hpp"
#include "layerlab/numerics/bvp.hpp"
#include "layerlab/numerics/quadrature.hpp"
#include "layerlab/numerics/radial.hpp"
#include "layerlab/numerics/roots.hpp"
#include "layerlab/plate.hpp"
#include "layerlab/regime.hpp"
#include "layerlab/sphere.hpp"
