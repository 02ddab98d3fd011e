#pragma once

// Umbrella header: the whole packet imaging stack in one include.

#include "bitio.hpp"
#include "channel_sim.hpp"
#include "dct.hpp"
#include "framing.hpp"
#include "image_model.hpp"
#include "packet_stream.hpp"
#include "pdp_codec.hpp"
#include "pipeline.hpp"
#include "pixel_sequence.hpp"
#include "ppm.hpp"
#include "reconstruction.hpp"
