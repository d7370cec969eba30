#pragma once

// Convenience umbrella for the whole library.

#include "tailmass/bayesnet.hpp"
#include "tailmass/contmodel.hpp"
#include "tailmass/csv.hpp"
#include "tailmass/errors.hpp"
#include "tailmass/mass_curve.hpp"
#include "tailmass/netio.hpp"
#include "tailmass/prng.hpp"
#include "tailmass/sample.hpp"
#include "tailmass/tailfit.hpp"
