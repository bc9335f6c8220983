#pragma once

#include "qmt/chowliu.hpp"
#include "qmt/density.hpp"
#include "qmt/entropy.hpp"
#include "qmt/gadget.hpp"
#include "qmt/graph.hpp"
#include "qmt/io.hpp"
#include "qmt/layout.hpp"
#include "qmt/marginal_set.hpp"
#include "qmt/markov_tree.hpp"
#include "qmt/matrix.hpp"
#include "qmt/maxent.hpp"
#include "qmt/petz.hpp"
#include "qmt/rng.hpp"
#include "qmt/spectral.hpp"
#include "qmt/tensor.hpp"
