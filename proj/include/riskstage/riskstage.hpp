#pragma once

#include "riskstage/errors.hpp"
#include "riskstage/random.hpp"
#include "riskstage/risk.hpp"
#include "riskstage/model.hpp"
#include "riskstage/graph.hpp"
#include "riskstage/feasible.hpp"
#include "riskstage/evaluate.hpp"
#include "riskstage/exact.hpp"
#include "riskstage/transforms.hpp"
#include "riskstage/lp.hpp"
#include "riskstage/selection.hpp"
#include "riskstage/networks.hpp"
#include "riskstage/gadgets.hpp"
#include "riskstage/io.hpp"
