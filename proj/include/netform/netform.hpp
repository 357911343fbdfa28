#pragma once

#include "netform/analysis.hpp"
#include "netform/artifacts.hpp"
#include "netform/condensation.hpp"
#include "netform/converge_path.hpp"
#include "netform/dynamics.hpp"
#include "netform/graph.hpp"
#include "netform/params.hpp"
#include "netform/rational.hpp"
#include "netform/rng.hpp"
#include "netform/serialize.hpp"
#include "netform/utility.hpp"
