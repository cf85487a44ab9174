#pragma once

#include "corona/analytics.hpp"
#include "corona/common.hpp"
#include "corona/dynamics.hpp"
#include "corona/graph.hpp"
#include "corona/io.hpp"
#include "corona/linalg.hpp"
#include "corona/spectra.hpp"
#include "corona/verify.hpp"
