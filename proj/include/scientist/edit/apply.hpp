#pragma once

#include <string>
#include <vector>

#include "scientist/edit/edit_block.hpp"
#include "scientist/edit/workspace.hpp"

namespace scientist::edit {

struct AppliedEdit {
  std::string file_path;
  std::size_t offset = 0;
};

struct FailedEdit {
  EditBlock block;
  std::string reason;
};

struct EditOutcome {
  std::vector<AppliedEdit> applied;
  std::vector<FailedEdit> failed;

  bool ok() const { return failed.empty(); }
};

// Applies blocks in order. A block whose search text is missing or occurs
// more than once fails and leaves its file untouched; later blocks still run.
// Before the first write, files about to change are copied into the next
// numbered generation under .snapshots/.
EditOutcome apply_edits(const Workspace& workspace, const std::vector<EditBlock>& blocks,
                        bool snapshot = true);

std::string describe_failures(const std::vector<FailedEdit>& failed);

}  // namespace scientist::edit
