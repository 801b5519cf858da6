#pragma once

#include "stablevol/analysis.hpp"
#include "stablevol/config.hpp"
#include "stablevol/csv.hpp"
#include "stablevol/lattice.hpp"
#include "stablevol/model.hpp"
#include "stablevol/rng.hpp"
#include "stablevol/runner.hpp"
#include "stablevol/sampler.hpp"
#include "stablevol/scheme.hpp"
#include "stablevol/stable_law.hpp"
