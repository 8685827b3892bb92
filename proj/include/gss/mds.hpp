#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gss/error.hpp"
#include "gss/gf.hpp"

namespace gss {

// Systematic [n, k] MDS code: a polynomial-evaluation generator over the
// points 0..n-1, row-reduced so the first k columns form the identity. Any k
// columns of the result are linearly independent, so any n - k erasures are
// recoverable. The field must outlive the code.
class MdsCode {
 public:
  static MdsCode build(int n, int k, const Gf& field) {
    if (k < 1 || n < k)
      fail(ErrorCode::kBadInput,
           "need 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
    if (static_cast<std::uint32_t>(n) > field.order())
      fail(ErrorCode::kLengthExceedsField,
           "length " + std::to_string(n) + " exceeds field order " +
               std::to_string(field.order()));
    std::vector<std::uint16_t> gen(static_cast<std::size_t>(k) * n);
    for (int row = 0; row < k; ++row)
      for (int col = 0; col < n; ++col)
        gen[static_cast<std::size_t>(row) * n + col] =
            field.pow_of(static_cast<std::uint16_t>(col), row);

    for (int col = 0; col < k; ++col) {
      int pivot = -1;
      for (int row = col; row < k; ++row)
        if (gen[static_cast<std::size_t>(row) * n + col] != 0) {
          pivot = row;
          break;
        }
      if (pivot < 0) throw std::logic_error("evaluation generator lost rank");
      if (pivot != col)
        for (int c = 0; c < n; ++c)
          std::swap(gen[static_cast<std::size_t>(pivot) * n + c],
                    gen[static_cast<std::size_t>(col) * n + c]);
      const std::uint16_t scale = field.inv(gen[static_cast<std::size_t>(col) * n + col]);
      for (int c = 0; c < n; ++c) {
        auto& cell = gen[static_cast<std::size_t>(col) * n + c];
        cell = field.mul(cell, scale);
      }
      for (int row = 0; row < k; ++row) {
        if (row == col) continue;
        const std::uint16_t factor = gen[static_cast<std::size_t>(row) * n + col];
        if (factor == 0) continue;
        for (int c = 0; c < n; ++c)
          gen[static_cast<std::size_t>(row) * n + c] =
              field.add(gen[static_cast<std::size_t>(row) * n + c],
                        field.mul(factor, gen[static_cast<std::size_t>(col) * n + c]));
      }
    }
    return MdsCode(n, k, field, std::move(gen));
  }

  int n() const { return n_; }
  int k() const { return k_; }
  const Gf& field() const { return *field_; }

  std::uint16_t generator(int row, int col) const {
    return gen_[static_cast<std::size_t>(row) * n_ + col];
  }

  std::vector<std::uint16_t> encode(std::span<const std::uint16_t> message) const {
    if (message.size() != static_cast<std::size_t>(k_))
      fail(ErrorCode::kLengthMismatch, "message has " + std::to_string(message.size()) +
                                           " symbols, code needs " + std::to_string(k_));
    std::vector<std::uint16_t> out(n_, 0);
    std::copy(message.begin(), message.end(), out.begin());
    for (int col = k_; col < n_; ++col) {
      std::uint16_t acc = 0;
      for (int row = 0; row < k_; ++row)
        acc = field_->add(acc, field_->mul(message[row], generator(row, col)));
      out[col] = acc;
    }
    return out;
  }

  // Recovers the message from any codeword with at most n - k missing
  // symbols, by solving against the first k surviving columns.
  std::vector<std::uint16_t> erasure_decode(
      const std::vector<std::optional<std::uint16_t>>& received) const {
    if (received.size() != static_cast<std::size_t>(n_))
      fail(ErrorCode::kLengthMismatch, "received word has " +
                                           std::to_string(received.size()) +
                                           " slots, code length is " + std::to_string(n_));
    int missing = 0;
    for (const auto& s : received)
      if (!s) ++missing;
    if (missing > n_ - k_)
      fail(ErrorCode::kTooManyErasures, std::to_string(missing) + " erasures, code corrects " +
                                            std::to_string(n_ - k_));

    bool prefix_intact = true;
    for (int i = 0; i < k_; ++i)
      if (!received[i]) {
        prefix_intact = false;
        break;
      }
    if (prefix_intact) {
      std::vector<std::uint16_t> message(k_);
      for (int i = 0; i < k_; ++i) message[i] = *received[i];
      return message;
    }

    std::vector<int> cols;
    cols.reserve(k_);
    for (int i = 0; i < n_ && static_cast<int>(cols.size()) < k_; ++i)
      if (received[i]) cols.push_back(i);

    // Solve x * G[:, cols] = y for the message x, as the k x (k+1) system
    // G[:, cols]^T x = y.
    std::vector<std::uint16_t> m(static_cast<std::size_t>(k_) * (k_ + 1));
    for (int row = 0; row < k_; ++row) {
      for (int col = 0; col < k_; ++col)
        m[static_cast<std::size_t>(row) * (k_ + 1) + col] = generator(col, cols[row]);
      m[static_cast<std::size_t>(row) * (k_ + 1) + k_] = *received[cols[row]];
    }
    for (int col = 0; col < k_; ++col) {
      int pivot = -1;
      for (int row = col; row < k_; ++row)
        if (m[static_cast<std::size_t>(row) * (k_ + 1) + col] != 0) {
          pivot = row;
          break;
        }
      if (pivot < 0)
        throw std::logic_error("singular erasure system; generator is not MDS");
      if (pivot != col)
        for (int c = col; c <= k_; ++c)
          std::swap(m[static_cast<std::size_t>(pivot) * (k_ + 1) + c],
                    m[static_cast<std::size_t>(col) * (k_ + 1) + c]);
      const std::uint16_t scale =
          field_->inv(m[static_cast<std::size_t>(col) * (k_ + 1) + col]);
      for (int c = col; c <= k_; ++c) {
        auto& cell = m[static_cast<std::size_t>(col) * (k_ + 1) + c];
        cell = field_->mul(cell, scale);
      }
      for (int row = 0; row < k_; ++row) {
        if (row == col) continue;
        const std::uint16_t factor = m[static_cast<std::size_t>(row) * (k_ + 1) + col];
        if (factor == 0) continue;
        for (int c = col; c <= k_; ++c)
          m[static_cast<std::size_t>(row) * (k_ + 1) + c] =
              field_->add(m[static_cast<std::size_t>(row) * (k_ + 1) + c],
                          field_->mul(factor, m[static_cast<std::size_t>(col) * (k_ + 1) + c]));
      }
    }
    std::vector<std::uint16_t> message(k_);
    for (int i = 0; i < k_; ++i) message[i] = m[static_cast<std::size_t>(i) * (k_ + 1) + k_];
    return message;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"n", n_},
                          {"k", k_},
                          {"field_order", field_->order()},
                          {"primitive_poly", field_->primitive_poly()}};
  }

  static MdsCode from_json(const nlohmann::json& j) {
    const auto order = j.at("field_order").get<std::uint32_t>();
    const Gf& field = Gf::for_order(order);
    if (j.contains("primitive_poly") &&
        j.at("primitive_poly").get<std::uint32_t>() != field.primitive_poly())
      fail(ErrorCode::kBadInput,
           "serialized code uses primitive polynomial " +
               std::to_string(j.at("primitive_poly").get<std::uint32_t>()) +
               ", this build uses " + std::to_string(field.primitive_poly()));
    return build(j.at("n").get<int>(), j.at("k").get<int>(), field);
  }

 private:
  MdsCode(int n, int k, const Gf& field, std::vector<std::uint16_t> gen)
      : n_(n), k_(k), field_(&field), gen_(std::move(gen)) {}

  int n_;
  int k_;
  const Gf* field_;
  std::vector<std::uint16_t> gen_;
};

}  // namespace gss
