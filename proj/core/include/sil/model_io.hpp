#pragma once

#include <string>

#include "sil/cij.hpp"
#include "sil/ledger.hpp"
#include "sil/models.hpp"
#include "sil/surface.hpp"

namespace sil {

inline constexpr const char* kToolVersion = "sil 0.1.0";

// 64-bit FNV-1a over the raw bytes, rendered as "fnv1a64:<hex>".
std::string content_hash(const std::string& bytes);

// Model files are UTF-8 JSON; rotation numbers survive exactly (rational p/q
// or decimal truncation with declared digits) and relations are linear
// equations over named rotation values.  parse(emit(m)) == m on canonical
// form, byte for byte.
SurfaceModel parse_model(const std::string& json_text);
std::string emit_model(const SurfaceModel& model, const std::string& name = "");

SurfaceModel parse_model_file(const std::string& path, std::string* raw = nullptr);
void write_file(const std::string& path, const std::string& bytes);

// Abstract instances given directly as (beta, alphas) rows.
AbstractJumpInstance parse_abstract_instance(const std::string& json_text,
                                             Rat default_delta = Rat(1, 20));

std::string emit_certificate(const JumpCertificate& cert,
                             const std::string& model_hash);
JumpCertificate parse_certificate(const std::string& json_text,
                                  std::string* model_hash = nullptr);

std::string emit_report(const LedgerReport& report, const std::string& model_hash);

std::string emit_ellipsoid_model(const EllipsoidSpec& spec);

} // namespace sil
