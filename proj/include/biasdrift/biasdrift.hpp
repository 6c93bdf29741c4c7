#pragma once

#include "biasdrift/core.hpp"
#include "biasdrift/csv.hpp"
#include "biasdrift/date.hpp"
#include "biasdrift/emit.hpp"
#include "biasdrift/error.hpp"
#include "biasdrift/metrics.hpp"
#include "biasdrift/store.hpp"
