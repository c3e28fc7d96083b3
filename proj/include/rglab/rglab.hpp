#pragma once

#include "rglab/gf256.hpp"
#include "rglab/matrix.hpp"
#include "rglab/rational.hpp"
#include "rglab/bounds.hpp"
#include "rglab/variables.hpp"
#include "rglab/codes.hpp"
#include "rglab/entropy.hpp"
#include "rglab/proofkit.hpp"
#include "rglab/share_file.hpp"
