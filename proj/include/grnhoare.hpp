#pragma once

#include "grnhoare/error.hpp"
#include "grnhoare/network.hpp"
#include "grnhoare/assertion.hpp"
#include "grnhoare/simplify.hpp"
#include "grnhoare/program.hpp"
#include "grnhoare/parser.hpp"
#include "grnhoare/wp.hpp"
#include "grnhoare/oracle.hpp"
#include "grnhoare/solver.hpp"
#include "grnhoare/report.hpp"
