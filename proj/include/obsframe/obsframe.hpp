#ifndef OBSFRAME_OBSFRAME_HPP
#define OBSFRAME_OBSFRAME_HPP

#include "obsframe/action_codec.hpp"
#include "obsframe/bench.hpp"
#include "obsframe/camera.hpp"
#include "obsframe/dataset.hpp"
#include "obsframe/episode.hpp"
#include "obsframe/error.hpp"
#include "obsframe/pipeline.hpp"
#include "obsframe/regressor.hpp"
#include "obsframe/se3.hpp"
#include "obsframe/synthetic.hpp"

#endif  // OBSFRAME_OBSFRAME_HPP
