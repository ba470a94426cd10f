#pragma once

#include <stdexcept>
#include <string>

namespace unsafe_audit {

class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public AuditError {
 public:
  using AuditError::AuditError;
};

/// go.mod without a module directive.
class MalformedManifest : public AuditError {
 public:
  using AuditError::AuditError;
};

/// Statistics requested over zero projects.
class EmptyCorpus : public AuditError {
 public:
  using AuditError::AuditError;
};

}  // namespace unsafe_audit
