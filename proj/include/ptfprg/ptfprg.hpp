#pragma once

// Umbrella header.

#include "ptfprg/corpus.hpp"
#include "ptfprg/derivatives.hpp"
#include "ptfprg/experiments.hpp"
#include "ptfprg/gaussian_analysis.hpp"
#include "ptfprg/hermite.hpp"
#include "ptfprg/moment_sampler.hpp"
#include "ptfprg/multi_index.hpp"
#include "ptfprg/parallel.hpp"
#include "ptfprg/poly.hpp"
#include "ptfprg/poly_json.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/quadrature.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/report.hpp"
#include "ptfprg/stats.hpp"
