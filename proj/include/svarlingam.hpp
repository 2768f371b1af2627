#pragma once

// Umbrella header.

#include "svarlingam/cointegration.hpp"
#include "svarlingam/core.hpp"
#include "svarlingam/csv.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/diagnostics.hpp"
#include "svarlingam/ica.hpp"
#include "svarlingam/irf.hpp"
#include "svarlingam/lingam.hpp"
#include "svarlingam/pipeline.hpp"
#include "svarlingam/report.hpp"
#include "svarlingam/stats.hpp"
#include "svarlingam/svar_lingam.hpp"
#include "svarlingam/synthetic.hpp"
#include "svarlingam/unit_root.hpp"
#include "svarlingam/var.hpp"
