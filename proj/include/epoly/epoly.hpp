#pragma once

#include "epoly/critical_spectra.hpp"
#include "epoly/entropy_purity.hpp"
#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/hypercube.hpp"
#include "epoly/min_norm.hpp"
#include "epoly/random_ensembles.hpp"
#include "epoly/rng.hpp"
#include "epoly/sign_vector.hpp"
#include "epoly/spectra_db.hpp"
#include "epoly/state_marginals.hpp"
#include "epoly/statistics.hpp"
#include "epoly/symmetry.hpp"
#include "epoly/version.hpp"
