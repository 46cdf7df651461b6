// Copyright 2026 the ccdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mechanism.hpp"

namespace ccdp {

std::optional<LossValue> Mechanism::declared_loss_for(
    const LossValue& like) const {
  for (const auto& d : declared_losses()) {
    if (loss_tag(d) != loss_tag(like)) continue;
    if (loss_tag(d) == LossTag::kRenyi &&
        std::get<Renyi>(d).alpha != std::get<Renyi>(like).alpha) {
      continue;
    }
    return d;
  }
  return std::nullopt;
}

std::vector<Branch> halted_branch(const std::string& state, HaltReason reason) {
  return {Branch{Rational(1), state, Message::halt(reason)}};
}

}  // namespace ccdp
