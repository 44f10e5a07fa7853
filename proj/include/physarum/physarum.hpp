#pragma once

#include "physarum/analysis.hpp"
#include "physarum/csv.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/energy.hpp"
#include "physarum/error.hpp"
#include "physarum/experiments.hpp"
#include "physarum/linalg.hpp"
#include "physarum/lyapunov.hpp"
#include "physarum/lyapunov_audit.hpp"
#include "physarum/oracle.hpp"
#include "physarum/problem.hpp"
#include "physarum/problem_io.hpp"
#include "physarum/random_instances.hpp"
