#pragma once

// Umbrella header for the commit contribution-rate analysis library.

#include "crim/classify.hpp"
#include "crim/commit.hpp"
#include "crim/config.hpp"
#include "crim/csv.hpp"
#include "crim/diffsize.hpp"
#include "crim/errors.hpp"
#include "crim/git_extract.hpp"
#include "crim/imputation.hpp"
#include "crim/pipeline.hpp"
#include "crim/report.hpp"
#include "crim/stats.hpp"
#include "crim/timeline.hpp"
