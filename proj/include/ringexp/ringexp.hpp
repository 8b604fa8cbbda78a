#pragma once

#include "ringexp/configuration.hpp"
#include "ringexp/view.hpp"
#include "ringexp/structure.hpp"
#include "ringexp/decision.hpp"
#include "ringexp/protocol.hpp"
#include "ringexp/random.hpp"
#include "ringexp/engine.hpp"
#include "ringexp/trace_io.hpp"
#include "ringexp/parallel.hpp"
#include "ringexp/verify.hpp"
#include "ringexp/game.hpp"
#include "ringexp/impossibility.hpp"
