#pragma once

#include "treewave/errors.hpp"
#include "treewave/exact_scalar.hpp"
#include "treewave/tree.hpp"
#include "treewave/tree_function.hpp"
#include "treewave/laplacians.hpp"
#include "treewave/transforms.hpp"
#include "treewave/wave.hpp"
#include "treewave/energy.hpp"
#include "treewave/io.hpp"
#include "treewave/verify.hpp"
