#pragma once

#include "lumprank/decomposition.hpp"
#include "lumprank/dense.hpp"
#include "lumprank/error.hpp"
#include "lumprank/generate.hpp"
#include "lumprank/graph.hpp"
#include "lumprank/lumping.hpp"
#include "lumprank/sparse.hpp"
#include "lumprank/transform.hpp"
