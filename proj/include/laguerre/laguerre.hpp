#pragma once

#include "ensembles.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "identities.hpp"
#include "moment_sequence.hpp"
#include "moments.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "rates.hpp"
#include "rng.hpp"
#include "spectral.hpp"
