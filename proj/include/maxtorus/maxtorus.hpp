#pragma once

// Umbrella header.

#include "maxtorus/classify.hpp"
#include "maxtorus/document.hpp"
#include "maxtorus/errors.hpp"
#include "maxtorus/freeness.hpp"
#include "maxtorus/integer_matrix.hpp"
#include "maxtorus/lattice.hpp"
#include "maxtorus/polytope.hpp"
#include "maxtorus/version.hpp"
#include "maxtorus/weights.hpp"
