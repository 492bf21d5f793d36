#ifndef MWINDEX_MWINDEX_HPP
#define MWINDEX_MWINDEX_HPP

// Umbrella header: complex index of refraction of a dilute gas for
// matter waves, from the interaction potential up.

#include "mwindex/constants.hpp"
#include "mwindex/errors.hpp"
#include "mwindex/mc.hpp"
#include "mwindex/numerov.hpp"
#include "mwindex/potentials.hpp"
#include "mwindex/quadrature.hpp"
#include "mwindex/refindex.hpp"
#include "mwindex/rng.hpp"
#include "mwindex/scattering.hpp"
#include "mwindex/special.hpp"
#include "mwindex/system.hpp"
#include "mwindex/thermal.hpp"

#endif
