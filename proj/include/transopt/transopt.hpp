#pragma once

#include "matrix.hpp"
#include "rng.hpp"
#include "transship.hpp"
#include "model.hpp"
#include "sampling.hpp"
#include "evolve.hpp"
#include "experiment.hpp"
