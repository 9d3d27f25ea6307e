#ifndef RDTK_RDTK_HPP
#define RDTK_RDTK_HPP

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"
#include "rdtk/json_io.hpp"
#include "rdtk/metrics.hpp"
#include "rdtk/model.hpp"
#include "rdtk/profiler.hpp"
#include "rdtk/rng.hpp"
#include "rdtk/simulator.hpp"
#include "rdtk/solvers.hpp"
#include "rdtk/sweep.hpp"
#include "rdtk/trace.hpp"

#endif // RDTK_RDTK_HPP
