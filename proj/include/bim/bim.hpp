#ifndef BIM_BIM_HPP
#define BIM_BIM_HPP

#include "bim/baselines.hpp"
#include "bim/boost_sa.hpp"
#include "bim/candidate.hpp"
#include "bim/diffusion.hpp"
#include "bim/graph.hpp"
#include "bim/harness.hpp"
#include "bim/indicators.hpp"
#include "bim/random.hpp"
#include "bim/report.hpp"
#include "bim/seed_set.hpp"

#endif  // BIM_BIM_HPP
