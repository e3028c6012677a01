#pragma once

#include "pinncert/activation.hpp"
#include "pinncert/bounds.hpp"
#include "pinncert/common.hpp"
#include "pinncert/domain.hpp"
#include "pinncert/expression.hpp"
#include "pinncert/jet.hpp"
#include "pinncert/loss.hpp"
#include "pinncert/metrics.hpp"
#include "pinncert/network.hpp"
#include "pinncert/optimize.hpp"
#include "pinncert/problem.hpp"
#include "pinncert/quadrature.hpp"
#include "pinncert/residual.hpp"
#include "pinncert/runner.hpp"
#include "pinncert/serialize.hpp"
#include "pinncert/theory.hpp"
