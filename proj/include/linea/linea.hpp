// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header: the whole library.

#include <linea/affine.hpp>
#include <linea/analyzer.hpp>
#include <linea/cli.hpp>
#include <linea/concrete.hpp>
#include <linea/domain.hpp>
#include <linea/interval.hpp>
#include <linea/lang.hpp>
#include <linea/linearize.hpp>
#include <linea/parser.hpp>
#include <linea/rational.hpp>
#include <linea/report.hpp>
#include <linea/symbolic.hpp>
