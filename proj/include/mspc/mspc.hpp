// mspc/mspc.hpp - umbrella header
#pragma once

#include "mspc/charts.hpp"
#include "mspc/errors.hpp"
#include "mspc/features.hpp"
#include "mspc/model_store.hpp"
#include "mspc/optimize.hpp"
#include "mspc/pca.hpp"
#include "mspc/report.hpp"
#include "mspc/signal.hpp"
#include "mspc/spectral.hpp"
#include "mspc/synth.hpp"
