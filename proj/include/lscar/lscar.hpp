// lscar.hpp: umbrella header

#pragma once

#include "lscar/algebra.hpp"
#include "lscar/entanglement.hpp"
#include "lscar/liouville.hpp"
#include "lscar/models.hpp"
#include "lscar/observables.hpp"
#include "lscar/pipeline.hpp"
#include "lscar/rng.hpp"
#include "lscar/scars.hpp"
#include "lscar/spectral.hpp"
#include "lscar/stats.hpp"

namespace lscar {
inline constexpr const char* library_version = "0.1.0";
}
