#pragma once

#include "run_spec.hpp"

namespace scn::cli {

int cmd_train(const RunSpec& spec);
int cmd_compare(const RunSpec& spec);
int cmd_ablate(const RunSpec& spec);
int cmd_gradcheck(const RunSpec& spec);
int cmd_gen_data(const RunSpec& spec);

}  // namespace scn::cli
