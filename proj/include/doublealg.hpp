#pragma once

#include "doublealg/rational.hpp"
#include "doublealg/chart.hpp"
#include "doublealg/polynomial.hpp"
#include "doublealg/poly_parse.hpp"
#include "doublealg/linalg.hpp"
#include "doublealg/verdict.hpp"
#include "doublealg/liealg.hpp"
#include "doublealg/multivector.hpp"
#include "doublealg/algebroid.hpp"
#include "doublealg/dvb.hpp"
#include "doublealg/lavb.hpp"
#include "doublealg/doublela.hpp"
#include "doublealg/matched.hpp"
#include "doublealg/model.hpp"
#include "doublealg/report.hpp"
#include "doublealg/cli.hpp"
