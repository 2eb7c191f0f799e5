#ifndef KSPM_KSPM_HPP
#define KSPM_KSPM_HPP

#include "kspm/analysis.hpp"
#include "kspm/avalanche.hpp"
#include "kspm/core.hpp"
#include "kspm/dds.hpp"
#include "kspm/error.hpp"
#include "kspm/io.hpp"
#include "kspm/spectrum.hpp"

#endif // KSPM_KSPM_HPP
