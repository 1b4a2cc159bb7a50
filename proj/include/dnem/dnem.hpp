#pragma once

#include "dnem/model.hpp"
#include "dnem/curves.hpp"
#include "dnem/pricing.hpp"
#include "dnem/response.hpp"
#include "dnem/bess.hpp"
#include "dnem/benchmark.hpp"
#include "dnem/welfare.hpp"
#include "dnem/sim.hpp"
#include "dnem/generator.hpp"
#include "dnem/config.hpp"
#include "dnem/report.hpp"
#include "dnem/cli.hpp"
