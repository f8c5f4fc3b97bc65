#pragma once

#include "teflow/error.hpp"
#include "teflow/parallel.hpp"
#include "teflow/panel.hpp"
#include "teflow/discretize.hpp"
#include "teflow/labeled_matrix.hpp"
#include "teflow/infotheory.hpp"
#include "teflow/ranking.hpp"
#include "teflow/correlation.hpp"
#include "teflow/surrogate.hpp"
#include "teflow/graph.hpp"
#include "teflow/centrality.hpp"
#include "teflow/embed.hpp"
#include "teflow/flows.hpp"
#include "teflow/synth.hpp"
#include "teflow/io.hpp"
#include "teflow/config.hpp"
