#pragma once

#include "qdba/classical_om.hpp"
#include "qdba/clock_sync.hpp"
#include "qdba/cost_model.hpp"
#include "qdba/dba_engine.hpp"
#include "qdba/errors.hpp"
#include "qdba/list_store.hpp"
#include "qdba/qudit_channel.hpp"
#include "qdba/rng.hpp"
#include "qdba/sim_harness.hpp"
#include "qdba/types.hpp"
