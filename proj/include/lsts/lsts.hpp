#ifndef LSTS_LSTS_HPP
#define LSTS_LSTS_HPP

#include "lsts/bench.hpp"
#include "lsts/errors.hpp"
#include "lsts/field.hpp"
#include "lsts/green.hpp"
#include "lsts/io.hpp"
#include "lsts/kernels.hpp"
#include "lsts/lattice.hpp"
#include "lsts/manifest.hpp"
#include "lsts/pattern_fft.hpp"
#include "lsts/run.hpp"
#include "lsts/smith.hpp"
#include "lsts/solver.hpp"
#include "lsts/tensor.hpp"
#include "lsts/types.hpp"

#endif  // LSTS_LSTS_HPP
