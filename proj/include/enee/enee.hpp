#pragma once

// Umbrella header: effective number of external events borrowed in hybrid
// controlled trials with time-to-event outcomes.

#include "enee/borrow.hpp"
#include "enee/config.hpp"
#include "enee/cox_model.hpp"
#include "enee/csv.hpp"
#include "enee/engine.hpp"
#include "enee/errors.hpp"
#include "enee/exponential_model.hpp"
#include "enee/model_fit.hpp"
#include "enee/plot.hpp"
#include "enee/record.hpp"
#include "enee/rng.hpp"
#include "enee/subject.hpp"
#include "enee/trial_sim.hpp"
