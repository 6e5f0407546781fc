#pragma once

#include "regowl/abox_checker.hpp"
#include "regowl/codegen.hpp"
#include "regowl/diagnostics.hpp"
#include "regowl/error.hpp"
#include "regowl/manchester.hpp"
#include "regowl/owl_model.hpp"
#include "regowl/preprocess.hpp"
#include "regowl/schema_check.hpp"
#include "regowl/text.hpp"
#include "regowl/tsv_ingest.hpp"
#include "regowl/vocab.hpp"
