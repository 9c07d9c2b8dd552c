#pragma once

#include "ferroqmc/error.hpp"
#include "ferroqmc/linalg.hpp"
#include "ferroqmc/hamiltonian.hpp"
#include "ferroqmc/trotter.hpp"
#include "ferroqmc/graph.hpp"
#include "ferroqmc/exact.hpp"
#include "ferroqmc/matchgraph.hpp"
#include "ferroqmc/rng.hpp"
#include "ferroqmc/sampler.hpp"
#include "ferroqmc/estimator.hpp"
#include "ferroqmc/pipeline.hpp"
