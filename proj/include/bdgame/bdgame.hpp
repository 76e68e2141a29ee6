#pragma once

#include "bdgame/attackers.hpp"
#include "bdgame/boltzmann.hpp"
#include "bdgame/common.hpp"
#include "bdgame/core.hpp"
#include "bdgame/decision_tree.hpp"
#include "bdgame/defenders.hpp"
#include "bdgame/exact_oracle.hpp"
#include "bdgame/experiments.hpp"
#include "bdgame/fixtures.hpp"
#include "bdgame/function_class.hpp"
#include "bdgame/game.hpp"
#include "bdgame/ggm_prf.hpp"
#include "bdgame/predictors.hpp"
#include "bdgame/priors.hpp"
#include "bdgame/random.hpp"
#include "bdgame/representation.hpp"
#include "bdgame/stats.hpp"
#include "bdgame/vc.hpp"
