#pragma once

#include "creditnet/bipartite.hpp"
#include "creditnet/community.hpp"
#include "creditnet/crs.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/graph.hpp"
#include "creditnet/ingest.hpp"
#include "creditnet/labels.hpp"
#include "creditnet/panel.hpp"
#include "creditnet/powerlaw.hpp"
#include "creditnet/random.hpp"
#include "creditnet/robustness.hpp"
#include "creditnet/synth.hpp"
#include "creditnet/topology.hpp"
