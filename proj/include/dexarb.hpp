#pragma once

#include "dexarb/amm.hpp"
#include "dexarb/analytics.hpp"
#include "dexarb/baseline_mbf.hpp"
#include "dexarb/date.hpp"
#include "dexarb/decimal.hpp"
#include "dexarb/errors.hpp"
#include "dexarb/line_graph.hpp"
#include "dexarb/market_data.hpp"
#include "dexarb/mmbf.hpp"
#include "dexarb/optimizer.hpp"
#include "dexarb/pipeline.hpp"
#include "dexarb/synthetic.hpp"
#include "dexarb/token_graph.hpp"
