// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

// Library umbrella. The command-line layer (smajudge/cli/) is not included;
// it needs the vendored CLI11 header on the include path.

#ifndef SMAJUDGE_SMAJUDGE_HPP
#define SMAJUDGE_SMAJUDGE_HPP

#include "smajudge/appellate/heads.hpp"
#include "smajudge/corpus/document.hpp"
#include "smajudge/corpus/labels.hpp"
#include "smajudge/corpus/penalty.hpp"
#include "smajudge/corpus/split.hpp"
#include "smajudge/corpus/synthetic.hpp"
#include "smajudge/corpus/vocabulary.hpp"
#include "smajudge/encoders/attention.hpp"
#include "smajudge/encoders/embedding.hpp"
#include "smajudge/encoders/init.hpp"
#include "smajudge/encoders/lstm.hpp"
#include "smajudge/evaluation/ablation.hpp"
#include "smajudge/evaluation/evaluate.hpp"
#include "smajudge/evaluation/heatmap.hpp"
#include "smajudge/evaluation/metrics.hpp"
#include "smajudge/evaluation/mlma.hpp"
#include "smajudge/evaluation/sensitivity.hpp"
#include "smajudge/evaluation/variants.hpp"
#include "smajudge/log.hpp"
#include "smajudge/lower_court/dependency_cell.hpp"
#include "smajudge/lower_court/task_graph.hpp"
#include "smajudge/numerics/adam.hpp"
#include "smajudge/numerics/error.hpp"
#include "smajudge/numerics/ops.hpp"
#include "smajudge/numerics/rng.hpp"
#include "smajudge/numerics/tape.hpp"
#include "smajudge/numerics/tensor.hpp"
#include "smajudge/training/checkpoint.hpp"
#include "smajudge/training/config.hpp"
#include "smajudge/training/data.hpp"
#include "smajudge/training/model.hpp"
#include "smajudge/training/predict.hpp"
#include "smajudge/training/trainer.hpp"

#endif  // SMAJUDGE_SMAJUDGE_HPP
