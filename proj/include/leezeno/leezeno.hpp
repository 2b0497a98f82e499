// leezeno.hpp - Umbrella header

#pragma once

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/io.hpp"
#include "leezeno/oracle.hpp"
#include "leezeno/poles.hpp"
#include "leezeno/quadrature.hpp"
#include "leezeno/reduction.hpp"
#include "leezeno/self_energy.hpp"
#include "leezeno/spectral.hpp"
#include "leezeno/survival.hpp"
#include "leezeno/zeno.hpp"
