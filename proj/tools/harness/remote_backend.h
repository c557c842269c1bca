/*!
 *  Copyright (c) 2026 by Contributors
 * \file remote_backend.h
 * \brief Backend that asks an HTTP endpoint for logits.
 *
 * Request body: {"context": string, "vocab_id": string}. Response body: {"logits": [number...]}.
 */
#ifndef DSLGUIDE_HARNESS_REMOTE_BACKEND_H_
#define DSLGUIDE_HARNESS_REMOTE_BACKEND_H_

#include <string>
#include <vector>

#include "dslguide/backend.h"

namespace dslguide {
namespace harness {

class RemoteBackend : public Backend {
 public:
  /*! \brief `url` is http://host[:port]/path. Throws BackendError for other forms. */
  RemoteBackend(const std::string& url, std::string vocab_id, std::size_t vocab_size,
                int timeout_seconds = 30);
  std::vector<double> Logits(const BackendRequest& request) override;
  std::size_t vocab_size() const override { return vocab_size_; }

 private:
  std::string origin_;
  std::string path_;
  std::string vocab_id_;
  std::size_t vocab_size_;
  int timeout_seconds_;
};

}  // namespace harness
}  // namespace dslguide

#endif  // DSLGUIDE_HARNESS_REMOTE_BACKEND_H_
