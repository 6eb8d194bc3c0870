#pragma once

// Umbrella header for the sound-quality toolkit.

#include "sqkit/bark.hpp"
#include "sqkit/envelope.hpp"
#include "sqkit/errors.hpp"
#include "sqkit/fft.hpp"
#include "sqkit/filters.hpp"
#include "sqkit/io/csv.hpp"
#include "sqkit/lufs.hpp"
#include "sqkit/manifest.hpp"
#include "sqkit/metrics.hpp"
#include "sqkit/ml/dataset.hpp"
#include "sqkit/ml/eval.hpp"
#include "sqkit/ml/forest.hpp"
#include "sqkit/ml/logreg.hpp"
#include "sqkit/ml/model_io.hpp"
#include "sqkit/ml/pca.hpp"
#include "sqkit/ml/svm.hpp"
#include "sqkit/rng.hpp"
#include "sqkit/signal.hpp"
#include "sqkit/spectral.hpp"
#include "sqkit/stimuli.hpp"
#include "sqkit/svg.hpp"
#include "sqkit/version.hpp"
#include "sqkit/wav.hpp"
