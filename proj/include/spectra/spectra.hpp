#pragma once

#include "spectra/config.hpp"
#include "spectra/csv.hpp"
#include "spectra/ecdf.hpp"
#include "spectra/errors.hpp"
#include "spectra/experiments.hpp"
#include "spectra/lag_matrix.hpp"
#include "spectra/limit_law.hpp"
#include "spectra/panel.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/rng.hpp"
#include "spectra/spectrum.hpp"
#include "spectra/svg.hpp"
