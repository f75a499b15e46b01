#pragma once

#include "swarmnet/dynamics.hpp"
#include "swarmnet/error.hpp"
#include "swarmnet/io.hpp"
#include "swarmnet/netgraph.hpp"
#include "swarmnet/numkit.hpp"
#include "swarmnet/scenario.hpp"
#include "swarmnet/simplex_flow.hpp"
#include "swarmnet/structured.hpp"
