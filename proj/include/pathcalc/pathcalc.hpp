#pragma once

// Umbrella header. fbm.hpp is intentionally left out: it is the only part of
// the library that depends on Eigen, include it directly where needed.

#include "csv.hpp"
#include "ensemble.hpp"
#include "finance.hpp"
#include "generators.hpp"
#include "partition.hpp"
#include "path.hpp"
#include "product.hpp"
#include "rng.hpp"
#include "stieltjes.hpp"
#include "variation.hpp"
