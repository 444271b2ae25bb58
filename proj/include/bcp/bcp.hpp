#pragma once

// Everything: geometry, cochains, kernels, the characteristic solver, the zoo and the checks.

#include <bcp/angle.hpp>
#include <bcp/arrangement.hpp>
#include <bcp/characteristics.hpp>
#include <bcp/cochain.hpp>
#include <bcp/config.hpp>
#include <bcp/errors.hpp>
#include <bcp/figures.hpp>
#include <bcp/io.hpp>
#include <bcp/kernels.hpp>
#include <bcp/moebius.hpp>
#include <bcp/parallel.hpp>
#include <bcp/pipeline.hpp>
#include <bcp/quadrature.hpp>
#include <bcp/rng.hpp>
#include <bcp/study.hpp>
#include <bcp/suite.hpp>
#include <bcp/tolerance.hpp>
#include <bcp/verify.hpp>
#include <bcp/zoo.hpp>
