#pragma once
// Umbrella header.
#include "schema.hpp"
#include "dataflow.hpp"
#include "models/train.hpp"
#include "models/serialize.hpp"
#include "adversarial/perturbation.hpp"
#include "adversarial/attack.hpp"
#include "evaluation/metrics.hpp"
#include "evaluation/tuning.hpp"
#include "bench/config.hpp"
#include "bench/report.hpp"
#include "bench/pipeline.hpp"
