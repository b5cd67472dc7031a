#pragma once

#include "counting.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "greedy.hpp"
#include "numeric.hpp"
#include "oracle.hpp"
#include "partial_instance.hpp"
#include "random.hpp"
#include "satdriver.hpp"
#include "satenc.hpp"
#include "solver.hpp"
#include "splitdp.hpp"
#include "transform.hpp"
#include "tree_io.hpp"
#include "reductions/clique.hpp"
#include "reductions/mec_tree.hpp"
#include "reductions/minimal_sr.hpp"
#include "reductions/threshold_trees.hpp"
#include "reductions/weighted_cnf.hpp"
