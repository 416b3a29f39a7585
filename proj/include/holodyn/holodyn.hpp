#pragma once

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/core/parallel.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/multiplier.hpp"
#include "holodyn/operators/symbol.hpp"
#include "holodyn/operators/operator.hpp"
#include "holodyn/operators/radstrom.hpp"
#include "holodyn/operators/linearization.hpp"
#include "holodyn/criteria/pseudo_shift.hpp"
#include "holodyn/criteria/fhc.hpp"
#include "holodyn/criteria/mixing.hpp"
#include "holodyn/geometry/grid.hpp"
#include "holodyn/geometry/domain.hpp"
#include "holodyn/geometry/checks.hpp"
#include "holodyn/classify/report.hpp"
#include "holodyn/classify/classify.hpp"
#include "holodyn/io/pbm.hpp"
#include "holodyn/io/json_io.hpp"
#include "holodyn/io/run.hpp"
