#pragma once

#include "sosched/analysis.hpp"
#include "sosched/engine.hpp"
#include "sosched/instances.hpp"
#include "sosched/io.hpp"
#include "sosched/matching.hpp"
#include "sosched/model.hpp"
#include "sosched/pf_solver.hpp"
#include "sosched/policies.hpp"
