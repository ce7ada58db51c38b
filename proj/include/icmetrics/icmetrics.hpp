#pragma once

#include "icmetrics/commands.hpp"
#include "icmetrics/depgraph.hpp"
#include "icmetrics/error.hpp"
#include "icmetrics/ingest.hpp"
#include "icmetrics/metrics.hpp"
#include "icmetrics/model.hpp"
#include "icmetrics/pipeline.hpp"
#include "icmetrics/pom.hpp"
#include "icmetrics/report.hpp"
#include "icmetrics/snapshot_json.hpp"
#include "icmetrics/stats.hpp"
#include "icmetrics/synth.hpp"
