#pragma once

#include "pbamb/rational.hpp"
#include "pbamb/error.hpp"
#include "pbamb/graph.hpp"
#include "pbamb/automaton.hpp"
#include "pbamb/core.hpp"
#include "pbamb/format.hpp"
#include "pbamb/patterns.hpp"
#include "pbamb/analysis.hpp"
#include "pbamb/degeneralize.hpp"
#include "pbamb/gadgets.hpp"
#include "pbamb/translations.hpp"
#include "pbamb/threshold.hpp"
