#pragma once

#include "fosr/error.hpp"
#include "fosr/experiments.hpp"
#include "fosr/generators.hpp"
#include "fosr/graph.hpp"
#include "fosr/io.hpp"
#include "fosr/random.hpp"
#include "fosr/rewire.hpp"
#include "fosr/smoothing.hpp"
#include "fosr/spectral.hpp"
