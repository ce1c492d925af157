#pragma once

#include "lportho/banach_geometry.hpp"
#include "lportho/bench.hpp"
#include "lportho/error.hpp"
#include "lportho/fft.hpp"
#include "lportho/io.hpp"
#include "lportho/pcg.hpp"
#include "lportho/signal_decomposition.hpp"
#include "lportho/spectral_diagnostics.hpp"
#include "lportho/toeplitz.hpp"
