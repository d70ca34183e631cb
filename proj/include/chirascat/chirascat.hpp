#pragma once
// Umbrella header for the chirascat library: collisional decoherence of
// chiral molecules in a helium background, from the parity-sensitive
// dispersion interaction through coupled-channel scattering to critical
// pressures for tunneling stabilization.

#include "chirascat/amplitude.hpp"
#include "chirascat/angular.hpp"
#include "chirascat/channels.hpp"
#include "chirascat/dataset.hpp"
#include "chirascat/dispersion.hpp"
#include "chirascat/geometry.hpp"
#include "chirascat/highenergy.hpp"
#include "chirascat/io.hpp"
#include "chirascat/master.hpp"
#include "chirascat/matching.hpp"
#include "chirascat/numerics.hpp"
#include "chirascat/observables.hpp"
#include "chirascat/predict.hpp"
#include "chirascat/propagator.hpp"
#include "chirascat/response.hpp"
#include "chirascat/rotor.hpp"
#include "chirascat/solver.hpp"
#include "chirascat/thermal.hpp"
#include "chirascat/units.hpp"
