#pragma once

#include "core.hpp"
#include "linalg.hpp"
#include "tree.hpp"
#include "ultrametric.hpp"
#include "graph.hpp"
#include "clade_graph.hpp"
#include "cones.hpp"
#include "rigidity.hpp"
#include "io.hpp"
