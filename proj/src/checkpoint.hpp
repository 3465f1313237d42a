#pragma once

#include "model.hpp"

namespace hdasc {

// Checkpoint file, little-endian throughout:
//   u32 magic 0x48444135, u16 version=1, u8 trained-stage flags,
//   u32 config length + config text (key = value lines),
//   u32 entry count, entries of (u16 name length, name bytes, u8 ndim,
//   u32 dims..., u64 payload offset), then the payload of f64 values.
// load(save(m)) reproduces every parameter bitwise.
void save_checkpoint(Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace hdasc
