#pragma once

#include "error.hpp"
#include "integer.hpp"
#include "normal_form.hpp"
#include "tree.hpp"
#include "forest.hpp"
#include "lie.hpp"
#include "tree_groups.hpp"
#include "eta.hpp"
#include "magnus.hpp"
#include "rewriting.hpp"
