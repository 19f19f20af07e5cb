#pragma once

#include "nlstar/automaton.hpp"
#include "nlstar/dfa_io.hpp"
#include "nlstar/distribution.hpp"
#include "nlstar/errors.hpp"
#include "nlstar/experiment.hpp"
#include "nlstar/format.hpp"
#include "nlstar/lstar.hpp"
#include "nlstar/noise.hpp"
#include "nlstar/oracle.hpp"
#include "nlstar/random.hpp"
#include "nlstar/report.hpp"
#include "nlstar/structure.hpp"
