#pragma once

#include "bsl/error.hpp"
#include "bsl/exactnum.hpp"
#include "bsl/bsgroup.hpp"
#include "bsl/tree.hpp"
#include "bsl/isometry.hpp"
#include "bsl/lattice.hpp"
#include "bsl/lab.hpp"
#include "bsl/io.hpp"
